#include "cosfit/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cosfit/error.hpp"

namespace cosfit {

double Anomaly::operator()(double x, double y) const {
  const double dx = x - cx;
  const double dy = y - cy;
  if (kind == AnomalyKind::gaussian) {
    return amplitude * std::exp(-0.5 * (dx * dx / (sx * sx) + dy * dy / (sy * sy)));
  }
  auto plateau = [this](double d, double half) {
    return 0.5 * (std::tanh((d + half) / edge) - std::tanh((d - half) / edge));
  };
  return amplitude * plateau(dx, sx) * plateau(dy, sy);
}

double FieldSpec::operator()(double x, double y) const {
  double s = 0.0;
  for (const auto& a : anomalies) s += a(x, y);
  return s;
}

FieldSpec default_field() {
  FieldSpec f;
  f.anomalies = {
      {AnomalyKind::gaussian, 0.30, 0.35, 0.15, 0.20, 1.0, 0.02},
      {AnomalyKind::gaussian, 0.75, 0.70, 0.20, 0.15, -0.7, 0.02},
      {AnomalyKind::gaussian, 0.85, 0.15, 0.25, 0.20, 0.6, 0.02},
  };
  return f;
}

ExperimentSpec default_experiment() {
  ExperimentSpec s;
  s.field = default_field();
  return s;
}

ExperimentSpec parse_experiment(const std::string& json_text) {
  ExperimentSpec s = default_experiment();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    if (j.contains("samples")) s.samples = j.at("samples").get<std::size_t>();
    if (j.contains("noise")) s.noise_fraction = j.at("noise").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("grid")) s.grid = j.at("grid").get<std::size_t>();
    if (j.contains("anomalies")) {
      s.field.anomalies.clear();
      for (const auto& a : j.at("anomalies")) {
        Anomaly an;
        const std::string kind = a.value("kind", "gaussian");
        if (kind == "gaussian") an.kind = AnomalyKind::gaussian;
        else if (kind == "box") an.kind = AnomalyKind::box;
        else throw DataError("experiment: unknown anomaly kind '" + kind + "'");
        an.cx = a.value("cx", an.cx);
        an.cy = a.value("cy", an.cy);
        an.sx = a.value("sx", an.sx);
        an.sy = a.value("sy", an.sy);
        an.amplitude = a.value("amplitude", an.amplitude);
        an.edge = a.value("edge", an.edge);
        if (!(an.sx > 0 && an.sy > 0 && an.edge > 0)) throw DataError("experiment: anomaly widths must be positive");
        s.field.anomalies.push_back(an);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("experiment: ") + e.what());
  }
  if (s.samples == 0) throw DataError("experiment: samples must be positive");
  if (!(s.noise_fraction >= 0.0)) throw DataError("experiment: noise must be nonnegative");
  if (s.grid == 0) throw DataError("experiment: grid must be at least 1");
  return s;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str());
}

io::GridField tabulate(const FieldSpec& field, std::size_t L) {
  if (L == 0) throw InvalidArgument("tabulate: L must be at least 1");
  io::GridField g;
  g.dim = 2;
  g.nx = g.ny = L + 1;
  g.x.resize(g.nx * g.ny);
  g.y.resize(g.nx * g.ny);
  g.values.resize(g.nx * g.ny);
  for (std::size_t i = 0; i <= L; ++i) {
    const double y = static_cast<double>(i) / static_cast<double>(L);
    for (std::size_t k = 0; k <= L; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(L);
      const std::size_t idx = i * g.nx + k;
      g.x[idx] = x;
      g.y[idx] = y;
      g.values[idx] = field(x, y);
    }
  }
  g.provenance = io::Provenance::reference;
  return g;
}

Experiment synth_experiment(const ExperimentSpec& spec) {
  if (spec.samples == 0) throw InvalidArgument("synth_experiment: samples must be positive");
  if (!(spec.noise_fraction >= 0.0)) throw InvalidArgument("synth_experiment: noise fraction must be nonnegative");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t r = spec.samples;
  std::vector<double> x(r), y(r), clean(r), noise(r, 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    x[j] = unit(rng);
    y[j] = unit(rng);
    clean[j] = spec.field(x[j], y[j]);
  }

  std::vector<double> values = clean;
  if (spec.noise_fraction > 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double nn = 0.0, fn = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      noise[j] = gauss(rng);
      nn += noise[j] * noise[j];
      fn += clean[j] * clean[j];
    }
    const double scale = spec.noise_fraction * std::sqrt(fn) / std::sqrt(nn);
    for (std::size_t j = 0; j < r; ++j) {
      noise[j] *= scale;
      values[j] = clean[j] + noise[j];
    }
  }

  SampleSet2D samples(PointSet2D(std::move(x), std::move(y)), std::move(values), uniform_weights(r));
  return Experiment{std::move(samples), std::move(clean), std::move(noise), tabulate(spec.field, spec.grid)};
}

}  // namespace cosfit
