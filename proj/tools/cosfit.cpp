// cosfit: command-line front end for cosine-polynomial scattered data fitting.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosfit/approx.hpp"
#include "cosfit/baseline.hpp"
#include "cosfit/error.hpp"
#include "cosfit/io.hpp"
#include "cosfit/synth.hpp"

using namespace cosfit;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Output file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw DataError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct FitArgs {
  std::string input;
  std::size_t dim = 1;
  std::optional<std::size_t> degree, degree_x, degree_y;
  std::string mode = "fixed";
  std::optional<double> epsilon, noise;
  std::string weights = "auto";
  double tol = 1e-8;
  std::optional<std::size_t> max_iter;
  std::string path = "normal";
  std::string moments = "exact";
  std::string discrepancy = "squared";
  std::size_t start_degree = 1, step = 1, max_degree = 0;
  bool merge = false;
  std::string out, report;
  std::optional<std::size_t> grid;
  std::string grid_out, heatmap;
};

struct EvalArgs {
  std::string coeffs;
  std::size_t grid = 150;
  std::optional<std::size_t> grid_y;
  std::string out, heatmap;
};

struct SynthArgs {
  std::string experiment;
  std::optional<std::size_t> samples, grid;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::string out, reference;
};

struct BaselineArgs {
  std::string input;
  std::size_t dim = 1;
  std::string kind = "periodic";
  std::optional<std::size_t> degree, degree_x, degree_y, coeffs;
  std::string weights = "auto";
  bool merge = false;
  std::size_t grid = 150;
  std::string out, reference, heatmap;
};

struct ErrorArgs {
  std::string fit, reference;
  std::size_t dim = 1;
};

struct ExperimentArgs {
  SynthArgs synth;
  std::size_t degree = 10;
  std::string mode = "fixed";
  std::optional<double> epsilon;
  double tol = 1e-8;
  std::optional<std::size_t> max_iter;
  std::string baseline;
  std::optional<std::size_t> baseline_coeffs;
  std::string out, heatmap;
};

io::WeightPolicy weight_policy(const std::string& w) {
  if (w == "midpoint") return io::WeightPolicy::midpoint;
  if (w == "uniform") return io::WeightPolicy::uniform;
  return io::WeightPolicy::automatic;
}

json report_json(const SolveReport& r) {
  json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = to_string(r.status);
  j["relative_residual"] = r.residual_history.empty() ? 0.0 : r.residual_history.back();
  if (r.kappa_bound) {
    j["kappa_bound"] = *r.kappa_bound;
    j["predicted_iterations"] = cg_predicted_iterations(*r.kappa_bound, 1e-8);
  }
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

json level_json(const LevelRecord& rec, std::size_t dim) {
  json j;
  j["event"] = "level";
  if (dim == 1) {
    j["degree"] = rec.degree;
    j["coefficients"] = rec.degree + 1;
  } else {
    j["degree_x"] = j["degree_y"] = rec.degree;
    j["coefficients"] = (rec.degree + 1) * (rec.degree + 1);
  }
  j["iterations"] = rec.iterations;
  j["weighted_residual"] = rec.weighted_residual;
  j["threshold"] = rec.threshold;
  j["accepted"] = rec.accepted;
  return j;
}

FitOptions fit_options(const FitArgs& a) {
  FitOptions o;
  o.solver.tol = a.tol;
  o.solver.max_iter = a.max_iter;
  o.path = a.path == "direct" ? FitPath::direct_ls : FitPath::normal_equations;
  o.moments.method = a.moments == "gridded" ? MomentMethod::gridded : MomentMethod::exact;
  return o;
}

MultilevelOptions multilevel_options(const FitArgs& a) {
  MultilevelOptions m;
  if (a.epsilon) m.epsilon = *a.epsilon;
  else if (a.noise) m.epsilon = *a.noise * *a.noise;
  else throw InvalidArgument("multilevel mode needs --epsilon (or --noise to use epsilon = noise^2)");
  m.start_degree = a.start_degree;
  m.step = a.step;
  m.max_degree = a.max_degree;
  m.form = a.discrepancy == "literal" ? DiscrepancyForm::literal : DiscrepancyForm::squared;
  m.fit = fit_options(a);
  return m;
}

void write_field(const io::GridField& g, const std::string& out, const std::string& heatmap) {
  if (!out.empty()) {
    Sink s(out);
    io::write_grid(s.stream(), g);
  }
  if (!heatmap.empty()) {
    Sink s(heatmap);
    io::write_pgm(s.stream(), g);
  }
}

int run_fit(const FitArgs& a) {
  const io::Dataset data = io::ingest_csv(a.input, a.dim, io::IngestOptions{a.merge});
  std::ofstream report_file;
  std::ostream* report = nullptr;
  if (!a.report.empty()) {
    report_file.open(a.report);
    if (!report_file) throw DataError("cannot write " + a.report);
    report = &report_file;
  } else if (!a.out.empty() && a.out != "-") {
    report = &std::cout;
  }
  Sink out(a.out);
  json summary;
  summary["event"] = "fit";
  summary["dim"] = a.dim;
  summary["samples"] = data.size();
  summary["mode"] = a.mode;

  if (a.dim == 1) {
    const SampleSet1D samples = io::to_samples_1d(data, weight_policy(a.weights));
    CosinePoly1D poly;
    if (a.mode == "multilevel") {
      const auto ml = multilevel_fit(samples, multilevel_options(a));
      if (report)
        for (const auto& rec : ml.trace) *report << level_json(rec, 1).dump() << '\n';
      poly = ml.poly;
      summary["accepted"] = ml.accepted;
      summary.update(report_json(ml.report));
    } else {
      if (!a.degree) throw InvalidArgument("fixed mode needs --degree");
      const auto f = fit_1d(samples, *a.degree, fit_options(a));
      poly = f.poly;
      summary.update(report_json(f.report));
    }
    summary["degree"] = poly.degree();
    summary["coefficients"] = poly.degree() + 1;
    const Residual res = residual(samples, poly);
    summary["weighted_sq_residual"] = res.weighted_sq_residual;
    summary["weighted_value_norm"] = res.weighted_value_norm;
    io::write_coefficients(out.stream(), poly, data.x_map);
    if (a.grid) write_field(io::evaluate_on_grid(poly, *a.grid, data.x_map), a.grid_out, a.heatmap);
  } else {
    const SampleSet2D samples = io::to_samples_2d(data, weight_policy(a.weights));
    CosinePoly2D poly;
    bool deficient = false;
    if (a.mode == "multilevel") {
      const auto ml = multilevel_fit(samples, multilevel_options(a));
      if (report)
        for (const auto& rec : ml.trace) *report << level_json(rec, 2).dump() << '\n';
      poly = ml.poly;
      summary["accepted"] = ml.accepted;
      summary.update(report_json(ml.report));
      deficient = ml.report.status == SolveStatus::breakdown;
    } else {
      const auto mx = a.degree_x ? a.degree_x : a.degree;
      const auto my = a.degree_y ? a.degree_y : a.degree;
      if (!mx || !my) throw InvalidArgument("fixed mode needs --degree or --degree-x/--degree-y");
      const auto f = fit_2d(samples, *mx, *my, fit_options(a));
      poly = f.poly;
      summary.update(report_json(f.report));
      deficient = f.status == FitStatus::rank_deficient;
    }
    summary["degree_x"] = poly.degree_x();
    summary["degree_y"] = poly.degree_y();
    summary["coefficients"] = poly.size();
    summary["rank_deficient"] = deficient;
    const Residual res = residual(samples, poly);
    summary["weighted_sq_residual"] = res.weighted_sq_residual;
    summary["weighted_value_norm"] = res.weighted_value_norm;
    io::write_coefficients(out.stream(), poly, data.x_map, data.y_map);
    if (a.grid) write_field(io::evaluate_on_grid(poly, *a.grid, *a.grid, data.x_map, data.y_map), a.grid_out, a.heatmap);
    if (deficient) std::cerr << "cosfit: warning: normal matrix is numerically singular; coefficients are not unique\n";
  }
  if (report) *report << summary.dump() << '\n';
  return kOk;
}

int run_eval(const EvalArgs& a) {
  const io::CoefficientFile f = io::read_coefficients(std::filesystem::path(a.coeffs));
  const io::GridField g = f.dim == 1 ? io::evaluate_on_grid(f.poly1, a.grid, f.x_map)
                                     : io::evaluate_on_grid(f.poly2, a.grid, a.grid_y.value_or(a.grid), f.x_map, f.y_map);
  write_field(g, a.out.empty() ? "-" : a.out, a.heatmap);
  return kOk;
}

ExperimentSpec experiment_spec(const SynthArgs& a) {
  ExperimentSpec s = a.experiment.empty() ? default_experiment() : load_experiment(a.experiment);
  if (a.samples) s.samples = *a.samples;
  if (a.noise) s.noise_fraction = *a.noise;
  if (a.seed) s.seed = *a.seed;
  if (a.grid) s.grid = *a.grid;
  return s;
}

int run_synth(const SynthArgs& a) {
  const Experiment e = synth_experiment(experiment_spec(a));
  Sink out(a.out);
  auto& os = out.stream();
  os << "x,y,value\n";
  for (std::size_t j = 0; j < e.samples.size(); ++j) {
    os << io::format_double(e.samples.points.x()[j]) << ',' << io::format_double(e.samples.points.y()[j]) << ','
       << io::format_double(e.samples.values[j]) << '\n';
  }
  if (!a.reference.empty()) write_field(e.reference, a.reference, "");
  return kOk;
}

int run_baseline(const BaselineArgs& a) {
  if (a.kind != "periodic") throw InvalidArgument("unknown baseline '" + a.kind + "'");
  const io::Dataset data = io::ingest_csv(a.input, a.dim, io::IngestOptions{a.merge});
  json j;
  j["event"] = "baseline";
  j["kind"] = a.kind;
  io::GridField g;
  bool deficient = false;
  if (a.dim == 1) {
    std::size_t n = 0;
    if (a.coeffs) n = *a.coeffs;
    else if (a.degree) n = default_periodic_count(*a.degree);
    else throw InvalidArgument("baseline needs --degree or --baseline-coeffs");
    const auto f = periodic_fit(io::to_samples_1d(data, weight_policy(a.weights)), n);
    g = evaluate_on_grid(f, a.grid, data.x_map);
    j["coefficients"] = n;
    j["rank"] = f.rank;
    deficient = f.rank_deficient;
  } else {
    const auto mx = a.degree_x ? a.degree_x : a.degree;
    const auto my = a.degree_y ? a.degree_y : a.degree;
    std::size_t nx = 0, ny = 0;
    if (a.coeffs) nx = ny = *a.coeffs;
    else if (mx && my) {
      nx = default_periodic_count(*mx);
      ny = default_periodic_count(*my);
    } else {
      throw InvalidArgument("baseline needs --degree or --baseline-coeffs");
    }
    const auto f = periodic_fit(io::to_samples_2d(data, weight_policy(a.weights)), nx, ny);
    g = evaluate_on_grid(f, a.grid, a.grid, data.x_map, data.y_map);
    j["coefficients_x"] = nx;
    j["coefficients_y"] = ny;
    j["coefficients"] = nx * ny;
    j["rank"] = f.rank;
    deficient = f.rank_deficient;
  }
  j["rank_deficient"] = deficient;
  if (deficient) std::cerr << "cosfit: warning: periodic baseline system is rank deficient\n";
  if (!a.reference.empty()) j["relative_error"] = io::relative_l2_error(g, io::read_grid(std::filesystem::path(a.reference), a.dim));
  write_field(g, a.out, a.heatmap);
  std::cout << j.dump() << '\n';
  return kOk;
}

int run_error(const ErrorArgs& a) {
  const auto fit = io::read_grid(std::filesystem::path(a.fit), a.dim);
  const auto ref = io::read_grid(std::filesystem::path(a.reference), a.dim);
  std::cout << io::format_double(io::relative_l2_error(fit, ref)) << '\n';
  return kOk;
}

int run_experiment(const ExperimentArgs& a) {
  const ExperimentSpec spec = experiment_spec(a.synth);
  const Experiment e = synth_experiment(spec);
  json j;
  j["event"] = "experiment";
  j["samples"] = spec.samples;
  j["noise"] = spec.noise_fraction;
  j["seed"] = spec.seed;
  j["grid"] = spec.grid;

  FitOptions fo;
  fo.solver.tol = a.tol;
  fo.solver.max_iter = a.max_iter;
  CosinePoly2D poly;
  if (a.mode == "multilevel") {
    MultilevelOptions m;
    m.epsilon = a.epsilon.value_or(spec.noise_fraction * spec.noise_fraction);
    if (!(m.epsilon > 0.0)) throw InvalidArgument("multilevel mode needs --epsilon when the noise fraction is 0");
    m.fit = fo;
    const auto ml = multilevel_fit(e.samples, m);
    for (const auto& rec : ml.trace) std::cout << level_json(rec, 2).dump() << '\n';
    poly = ml.poly;
    j["accepted"] = ml.accepted;
    j.update(report_json(ml.report));
  } else {
    const auto f = fit_2d(e.samples, a.degree, a.degree, fo);
    poly = f.poly;
    j.update(report_json(f.report));
    j["rank_deficient"] = f.status == FitStatus::rank_deficient;
  }
  j["degree_x"] = poly.degree_x();
  j["degree_y"] = poly.degree_y();
  j["coefficients"] = poly.size();
  const io::GridField g = io::evaluate_on_grid(poly, spec.grid, spec.grid);
  j["cosine_error"] = io::relative_l2_error(g, e.reference);
  if (!a.baseline.empty()) {
    if (a.baseline != "periodic") throw InvalidArgument("unknown baseline '" + a.baseline + "'");
    const std::size_t nx = a.baseline_coeffs.value_or(default_periodic_count(poly.degree_x()));
    const auto pf = periodic_fit(e.samples, nx, nx);
    j["baseline_coefficients"] = nx * nx;
    j["baseline_error"] = io::relative_l2_error(evaluate_on_grid(pf, spec.grid, spec.grid), e.reference);
    j["baseline_rank_deficient"] = pf.rank_deficient;
  }
  write_field(g, a.out, a.heatmap);
  std::cout << j.dump() << '\n';
  return kOk;
}

void add_degree_flags(CLI::App* c, std::optional<std::size_t>& d, std::optional<std::size_t>& dx,
                      std::optional<std::size_t>& dy) {
  c->add_option("--degree", d, "Polynomial degree M (both axes in 2D)");
  c->add_option("--degree-x", dx, "Degree along x (2D)");
  c->add_option("--degree-y", dy, "Degree along y (2D)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares approximation of scattered data by cosine polynomials"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* cfit = app.add_subcommand("fit", "Fit a cosine polynomial to a sample file");
  cfit->add_option("--input,-i", fit.input, "Sample CSV (x,value or x,y,value, optional weight column)")->required();
  cfit->add_option("--dim", fit.dim, "Dimension")->check(CLI::IsMember({1, 2}));
  add_degree_flags(cfit, fit.degree, fit.degree_x, fit.degree_y);
  cfit->add_option("--mode", fit.mode, "fixed or multilevel")->check(CLI::IsMember({"fixed", "multilevel"}));
  cfit->add_option("--epsilon", fit.epsilon, "Discrepancy parameter (multilevel)")->check(CLI::PositiveNumber);
  cfit->add_option("--noise", fit.noise, "Known noise fraction; multilevel epsilon defaults to its square")
      ->check(CLI::PositiveNumber);
  cfit->add_option("--discrepancy", fit.discrepancy, "squared or literal")->check(CLI::IsMember({"squared", "literal"}));
  cfit->add_option("--start-degree", fit.start_degree, "First multilevel degree");
  cfit->add_option("--step", fit.step, "Multilevel degree increment")->check(CLI::PositiveNumber);
  cfit->add_option("--max-degree", fit.max_degree, "Multilevel degree cap (0: largest admissible)");
  cfit->add_option("--weights", fit.weights, "midpoint, uniform or auto")
      ->check(CLI::IsMember({"midpoint", "uniform", "auto"}));
  cfit->add_option("--tol", fit.tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  cfit->add_option("--max-iter", fit.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  cfit->add_option("--path", fit.path, "normal (CG on normal equations) or direct (LSQR)")
      ->check(CLI::IsMember({"normal", "direct"}));
  cfit->add_option("--moments", fit.moments, "exact or gridded cosine sums")->check(CLI::IsMember({"exact", "gridded"}));
  cfit->add_flag("--merge-duplicates", fit.merge, "Average values at repeated locations");
  cfit->add_option("--out,-o", fit.out, "Coefficient CSV (default stdout)");
  cfit->add_option("--report", fit.report, "JSON-lines report file");
  cfit->add_option("--grid", fit.grid, "Also evaluate on the grid l/L")->check(CLI::PositiveNumber);
  cfit->add_option("--grid-out", fit.grid_out, "Grid CSV for --grid");
  cfit->add_option("--heatmap", fit.heatmap, "PGM heatmap for --grid");

  EvalArgs ev;
  auto* ceval = app.add_subcommand("eval", "Evaluate a coefficient file on a uniform grid");
  ceval->add_option("--coeffs,-c", ev.coeffs, "Coefficient CSV")->required();
  ceval->add_option("--grid", ev.grid, "Grid resolution L (L+1 nodes per axis)")->check(CLI::PositiveNumber);
  ceval->add_option("--grid-y", ev.grid_y, "Resolution along y (2D)")->check(CLI::PositiveNumber);
  ceval->add_option("--out,-o", ev.out, "Grid CSV (default stdout)");
  ceval->add_option("--heatmap", ev.heatmap, "PGM heatmap");

  SynthArgs sy;
  auto* csynth = app.add_subcommand("synth", "Draw noisy samples of a synthetic 2D field");
  csynth->add_option("--experiment", sy.experiment, "Experiment JSON");
  csynth->add_option("--samples", sy.samples, "Number of samples")->check(CLI::PositiveNumber);
  csynth->add_option("--noise", sy.noise, "Noise fraction")->check(CLI::NonNegativeNumber);
  csynth->add_option("--seed", sy.seed, "Random seed");
  csynth->add_option("--grid", sy.grid, "Reference grid resolution")->check(CLI::PositiveNumber);
  csynth->add_option("--out,-o", sy.out, "Sample CSV (default stdout)");
  csynth->add_option("--reference", sy.reference, "Reference grid CSV");

  BaselineArgs bl;
  auto* cbase = app.add_subcommand("baseline", "Periodic trigonometric least-squares baseline");
  cbase->add_option("--input,-i", bl.input, "Sample CSV")->required();
  cbase->add_option("--dim", bl.dim, "Dimension")->check(CLI::IsMember({1, 2}));
  cbase->add_option("--baseline", bl.kind, "Baseline kind")->check(CLI::IsMember({"periodic"}));
  add_degree_flags(cbase, bl.degree, bl.degree_x, bl.degree_y);
  cbase->add_option("--baseline-coeffs", bl.coeffs, "Odd number of periodic coefficients per axis");
  cbase->add_option("--weights", bl.weights, "midpoint, uniform or auto")
      ->check(CLI::IsMember({"midpoint", "uniform", "auto"}));
  cbase->add_flag("--merge-duplicates", bl.merge, "Average values at repeated locations");
  cbase->add_option("--grid", bl.grid, "Grid resolution L")->check(CLI::PositiveNumber);
  cbase->add_option("--out,-o", bl.out, "Grid CSV");
  cbase->add_option("--reference", bl.reference, "Reference grid CSV for the error");
  cbase->add_option("--heatmap", bl.heatmap, "PGM heatmap");

  ErrorArgs er;
  auto* cerr = app.add_subcommand("error", "Relative l2 error between two grid files");
  cerr->add_option("--fit", er.fit, "Fitted grid CSV")->required();
  cerr->add_option("--reference", er.reference, "Reference grid CSV")->required();
  cerr->add_option("--dim", er.dim, "Dimension")->check(CLI::IsMember({1, 2}));

  ExperimentArgs ex;
  auto* cexp = app.add_subcommand("experiment", "Synthetic 2D experiment: sample, fit, compare");
  cexp->add_option("--experiment", ex.synth.experiment, "Experiment JSON");
  cexp->add_option("--samples", ex.synth.samples, "Number of samples")->check(CLI::PositiveNumber);
  cexp->add_option("--noise", ex.synth.noise, "Noise fraction")->check(CLI::NonNegativeNumber);
  cexp->add_option("--seed", ex.synth.seed, "Random seed");
  cexp->add_option("--grid", ex.synth.grid, "Grid resolution L")->check(CLI::PositiveNumber);
  cexp->add_option("--degree", ex.degree, "Degree per axis (fixed mode)");
  cexp->add_option("--mode", ex.mode, "fixed or multilevel")->check(CLI::IsMember({"fixed", "multilevel"}));
  cexp->add_option("--epsilon", ex.epsilon, "Discrepancy parameter (default noise^2)")->check(CLI::PositiveNumber);
  cexp->add_option("--tol", ex.tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  cexp->add_option("--max-iter", ex.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  cexp->add_option("--baseline", ex.baseline, "Also fit a baseline")->check(CLI::IsMember({"periodic"}));
  cexp->add_option("--baseline-coeffs", ex.baseline_coeffs, "Periodic coefficients per axis (odd)");
  cexp->add_option("--out,-o", ex.out, "Fitted grid CSV");
  cexp->add_option("--heatmap", ex.heatmap, "PGM heatmap of the fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cfit) return run_fit(fit);
    if (*ceval) return run_eval(ev);
    if (*csynth) return run_synth(sy);
    if (*cbase) return run_baseline(bl);
    if (*cerr) return run_error(er);
    if (*cexp) return run_experiment(ex);
  } catch (const InvalidArgument& e) {
    std::cerr << "cosfit: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "cosfit: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "cosfit: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "cosfit: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
