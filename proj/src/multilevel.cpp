#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cosfit/approx.hpp"
#include "cosfit/error.hpp"
#include "detail/fit_internal.hpp"

namespace cosfit {
namespace {

void validate(const MultilevelOptions& o) {
  if (!(o.epsilon > 0.0) || !std::isfinite(o.epsilon)) {
    throw InvalidArgument("multilevel_fit: epsilon must be positive (got " + std::to_string(o.epsilon) + ")");
  }
  if (o.step == 0) throw InvalidArgument("multilevel_fit: degree step must be at least 1");
  o.fit.solver.validate();
}

LevelRecord judge(std::size_t degree, std::size_t iterations, const Residual& res, const MultilevelOptions& o) {
  LevelRecord rec;
  rec.degree = degree;
  rec.iterations = iterations;
  rec.weighted_residual =
      o.form == DiscrepancyForm::squared ? res.weighted_sq_residual : res.weighted_abs_residual;
  rec.threshold = o.epsilon * res.weighted_value_norm;
  rec.accepted = rec.weighted_residual <= rec.threshold;
  return rec;
}

// Moment sequences of one sample set, grown on demand.
class MomentCache {
 public:
  MomentCache(const SampleSet1D& samples) : samples_(samples), ws_(samples.size()) {
    for (std::size_t j = 0; j < ws_.size(); ++j) ws_[j] = samples.weights[j] * samples.values[j];
  }

  Assembly1D assemble(std::size_t M) {
    extend(w_moments_, samples_.weights, 2 * M + 2);
    extend(ws_moments_, ws_, M + 1);
    std::vector<double> gen(w_moments_.begin(), w_moments_.begin() + static_cast<std::ptrdiff_t>(2 * M + 2));
    for (double& g : gen) g *= 0.5;
    std::vector<double> rhs(ws_moments_.begin(), ws_moments_.begin() + static_cast<std::ptrdiff_t>(M + 1));
    rhs[0] /= std::numbers::sqrt2;
    return Assembly1D{THOperator(std::move(gen)), std::move(rhs)};
  }

 private:
  void extend(std::vector<double>& seq, std::span<const double> v, std::size_t len) {
    if (seq.size() >= len) return;
    const auto more = cosine_sums_range(samples_.points.points(), v, seq.size(), len);
    seq.insert(seq.end(), more.begin(), more.end());
  }

  const SampleSet1D& samples_;
  std::vector<double> ws_;
  std::vector<double> w_moments_;
  std::vector<double> ws_moments_;
};

std::vector<double> extend_1d(std::span<const double> c, std::size_t M) {
  std::vector<double> out(M + 1, 0.0);
  std::copy_n(c.begin(), std::min(c.size(), out.size()), out.begin());
  return out;
}

std::vector<double> extend_2d(const CosinePoly2D& p, std::size_t Mx, std::size_t My) {
  std::vector<double> out((Mx + 1) * (My + 1), 0.0);
  for (std::size_t l = 0; l <= std::min(My, p.degree_y()); ++l) {
    for (std::size_t k = 0; k <= std::min(Mx, p.degree_x()); ++k) out[l * (Mx + 1) + k] = p(k, l);
  }
  return out;
}

}  // namespace

MultilevelResult1D multilevel_fit(const SampleSet1D& samples, const MultilevelOptions& options) {
  validate(options);
  const std::size_t r = samples.size();
  const std::size_t cap = options.max_degree == 0 ? r - 1 : std::min(options.max_degree, r - 1);
  if (options.start_degree > cap) {
    throw InvalidArgument("multilevel_fit: start degree " + std::to_string(options.start_degree) +
                          " exceeds the largest admissible degree " + std::to_string(cap));
  }

  MomentCache cache(samples);
  MultilevelResult1D out;
  std::vector<double> prev;
  for (std::size_t M = options.start_degree; M <= cap; M += options.step) {
    SolverConfig cfg = options.fit.solver;
    if (options.warm_start && !prev.empty()) cfg.x0 = extend_1d(prev, M);

    SolveResult res;
    if (options.fit.path == FitPath::direct_ls) {
      res = detail::solve_direct_1d(samples, M, cfg);
    } else if (options.fit.moments.method == MomentMethod::exact) {
      const Assembly1D sys = cache.assemble(M);
      res = detail::solve_normal_1d(sys.op, sys.rhs, cfg);
    } else {
      const Assembly1D sys =
          assemble_1d(samples.points, samples.weights, samples.values, M, options.fit.moments);
      res = detail::solve_normal_1d(sys.op, sys.rhs, cfg);
    }

    out.poly = CosinePoly1D(res.x);
    out.report = std::move(res.report);
    detail::attach_condition_info(out.report, samples, M);
    prev = std::move(res.x);

    const LevelRecord rec = judge(M, out.report.iterations, residual(samples, out.poly), options);
    out.trace.push_back(rec);
    if (rec.accepted) {
      out.accepted = true;
      break;
    }
    if (cap - M < options.step) break;
  }
  return out;
}

MultilevelResult2D multilevel_fit(const SampleSet2D& samples, const MultilevelOptions& options) {
  validate(options);
  const std::size_t r = samples.size();
  std::size_t admissible = 0;
  while ((admissible + 2) * (admissible + 2) <= r) ++admissible;
  const std::size_t cap = options.max_degree == 0 ? admissible : std::min(options.max_degree, admissible);
  if (options.start_degree > cap) {
    throw InvalidArgument("multilevel_fit: start degree " + std::to_string(options.start_degree) +
                          " exceeds the largest admissible degree " + std::to_string(cap));
  }

  MultilevelResult2D out;
  bool have_prev = false;
  for (std::size_t M = options.start_degree; M <= cap; M += options.step) {
    FitOptions fo = options.fit;
    fo.solver.x0.clear();
    if (options.warm_start && have_prev) fo.solver.x0 = extend_2d(out.poly, M, M);

    FitResult2D fit = detail::solve_2d(samples, M, M, fo);
    out.poly = std::move(fit.poly);
    out.report = std::move(fit.report);
    have_prev = true;

    const LevelRecord rec = judge(M, out.report.iterations, residual(samples, out.poly), options);
    out.trace.push_back(rec);
    if (rec.accepted) {
      out.accepted = true;
      break;
    }
    if (cap - M < options.step) break;
  }
  return out;
}

}  // namespace cosfit
