#include "cosfit/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cosfit/error.hpp"
#include "cosfit/simd/kernels.hpp"
#include "detail/fit_internal.hpp"

namespace cosfit {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void check_sample_arrays(std::size_t r, std::span<const double> values, std::span<const double> weights,
                         const char* who) {
  if (values.size() != r || weights.size() != r) {
    throw InvalidArgument(std::string(who) + ": values/weights length does not match the point count");
  }
  for (std::size_t j = 0; j < r; ++j) {
    if (!std::isfinite(values[j])) throw InvalidArgument(std::string(who) + ": non-finite value at " + std::to_string(j));
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      throw InvalidArgument(std::string(who) + ": weight at " + std::to_string(j) + " is not positive");
    }
  }
}

std::vector<double> sqrt_weights(std::span<const double> w) {
  std::vector<double> s(w.size());
  std::transform(w.begin(), w.end(), s.begin(), [](double v) { return std::sqrt(v); });
  return s;
}

// Empty if a CG run on a fixed pseudo-random right-hand side stays positive
// definite, otherwise the breakdown diagnostic.
std::string rank_probe(const LinearOperator& op, std::size_t n) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> b(n);
  for (double& e : b) e = unit(rng);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iter = n;
  const SolveResult probe = cg_solve(op, b, cfg);
  return probe.report.status == SolveStatus::breakdown ? probe.report.diagnostic : std::string();
}

}  // namespace

SampleSet1D::SampleSet1D(PointSet1D pts, std::vector<double> v, std::vector<double> w)
    : points(std::move(pts)), values(std::move(v)), weights(std::move(w)) {
  check_sample_arrays(points.size(), values, weights, "SampleSet1D");
}

SampleSet2D::SampleSet2D(PointSet2D pts, std::vector<double> v, std::vector<double> w)
    : points(std::move(pts)), values(std::move(v)), weights(std::move(w)) {
  check_sample_arrays(points.size(), values, weights, "SampleSet2D");
}

std::vector<double> midpoint_weights(const PointSet1D& pts) {
  const auto x = pts.points();
  const std::size_t r = x.size();
  std::vector<double> w(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double prev = j == 0 ? -x[0] : x[j - 1];
    const double next = j + 1 == r ? 2.0 - x[r - 1] : x[j + 1];
    w[j] = 0.5 * (next - prev);
  }
  return w;
}

std::vector<double> uniform_weights(std::size_t r) {
  if (r == 0) throw InvalidArgument("uniform_weights: r must be positive");
  return std::vector<double>(r, 1.0 / static_cast<double>(r));
}

SampleSet1D make_samples(std::vector<double> x, std::vector<double> values) {
  PointSet1D pts(std::move(x));
  std::vector<double> w = midpoint_weights(pts);
  return SampleSet1D(std::move(pts), std::move(values), std::move(w));
}

SampleSet2D make_samples(std::vector<double> x, std::vector<double> y, std::vector<double> values) {
  PointSet2D pts(std::move(x), std::move(y));
  std::vector<double> w = uniform_weights(pts.size());
  return SampleSet2D(std::move(pts), std::move(values), std::move(w));
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

namespace detail {

void attach_condition_info(SolveReport& report, const SampleSet1D& samples, std::size_t M) {
  const std::vector<double> mid = midpoint_weights(samples.points);
  for (std::size_t j = 0; j < mid.size(); ++j) {
    if (std::abs(mid[j] - samples.weights[j]) > 1e-12 * std::max(1.0, std::abs(mid[j]))) return;
  }
  const double delta = max_gap(samples.points.points());
  report.kappa_bound = condition_bound(delta, M);
  if (!report.kappa_bound) return;
  report.predicted_error_curve.clear();
  for (std::size_t n = 0; n <= report.iterations; ++n) {
    report.predicted_error_curve.push_back(cg_error_predictor(*report.kappa_bound, 1.0, n));
  }
}

SolveResult solve_normal_1d(const THOperator& op, std::span<const double> rhs, const SolverConfig& cfg) {
  SolveResult res = cg_solve([&](std::span<const double> x, std::span<double> y) { op.apply(x, y); }, rhs, cfg);
  if (res.report.status == SolveStatus::breakdown) {
    throw NumericalError("fit_1d: conjugate gradients broke down: " + res.report.diagnostic);
  }
  return res;
}

SolveResult solve_direct_1d(const SampleSet1D& samples, std::size_t M, const SolverConfig& cfg) {
  const auto& kern = simd::active();
  const std::size_t r = samples.size();
  const auto x = samples.points.points();
  const std::vector<double> sw = sqrt_weights(samples.weights);
  std::vector<double> s(r);
  kern.multiply(sw, samples.values, s);

  auto apply_v = [&](std::span<const double> c, std::span<double> out) {
    std::vector<double> a(c.begin(), c.end());
    a[0] *= kInvSqrt2;
    kern.cosine_synthesis(a, x, out);
    kern.multiply(out, sw, out);
  };
  auto apply_vt = [&](std::span<const double> y, std::span<double> out) {
    std::vector<double> t(r);
    kern.multiply(y, sw, t);
    kern.cosine_moments(x, t, 0, out);
    out[0] *= kInvSqrt2;
  };
  return lsqr_solve(apply_v, apply_vt, r, M + 1, s, cfg);
}

SolveResult solve_direct_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const SolverConfig& cfg) {
  const auto& kern = simd::active();
  const std::size_t r = samples.size();
  const std::size_t bx = Mx + 1;
  const std::size_t by = My + 1;
  const std::vector<double> sw = sqrt_weights(samples.weights);
  std::vector<double> s(r);
  kern.multiply(sw, samples.values, s);

  std::vector<double> tx(bx * r);
  std::vector<double> ty(by * r);
  kern.cosine_table(samples.points.x(), bx, tx);
  kern.cosine_table(samples.points.y(), by, ty);
  auto xrow = [&](std::size_t k) { return std::span<const double>(tx).subspan(k * r, r); };
  auto yrow = [&](std::size_t l) { return std::span<const double>(ty).subspan(l * r, r); };

  auto apply_v = [&](std::span<const double> c, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> inner(r);
    for (std::size_t l = 0; l < by; ++l) {
      std::fill(inner.begin(), inner.end(), 0.0);
      for (std::size_t k = 0; k < bx; ++k) {
        const double a = (k == 0 && l == 0) ? c[0] * kInvSqrt2 : c[l * bx + k];
        kern.axpy(a, xrow(k), inner);
      }
      kern.multiply_add(yrow(l), inner, out);
    }
    kern.multiply(out, sw, out);
  };
  auto apply_vt = [&](std::span<const double> y, std::span<double> out) {
    std::vector<double> t(r), u(r);
    kern.multiply(y, sw, t);
    for (std::size_t k = 0; k < bx; ++k) {
      kern.multiply(t, xrow(k), u);
      for (std::size_t l = 0; l < by; ++l) out[l * bx + k] = kern.dot(u, yrow(l));
    }
    out[0] *= kInvSqrt2;
  };
  return lsqr_solve(apply_v, apply_vt, r, bx * by, s, cfg);
}

FitResult2D solve_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const FitOptions& options) {
  FitResult2D out;
  SolveResult res;
  if (options.path == FitPath::direct_ls) {
    res = solve_direct_2d(samples, Mx, My, options.solver);
  } else {
    const Assembly2D sys = assemble_2d(samples.points, samples.weights, samples.values, Mx, My, options.moments);
    const LinearOperator op = [&](std::span<const double> x, std::span<double> y) { sys.op.apply(x, y); };
    res = cg_solve(op, sys.rhs, options.solver);
    if (options.rank_probe && res.report.status != SolveStatus::breakdown) {
      const std::string why = rank_probe(op, sys.op.size());
      if (!why.empty()) {
        res.report.status = SolveStatus::breakdown;
        res.report.converged = false;
        res.report.diagnostic = "rank probe: " + why;
      }
    }
  }
  if (res.report.status == SolveStatus::breakdown) out.status = FitStatus::rank_deficient;
  out.poly = CosinePoly2D(Mx, My, std::move(res.x));
  out.report = std::move(res.report);
  return out;
}

}  // namespace detail

FitResult1D fit_1d(const SampleSet1D& samples, std::size_t M, const FitOptions& options) {
  if (M >= samples.size()) {
    throw InvalidArgument("fit_1d: degree " + std::to_string(M) + " must be smaller than the sample count " +
                          std::to_string(samples.size()));
  }
  options.solver.validate();
  SolveResult res;
  if (options.path == FitPath::direct_ls) {
    res = detail::solve_direct_1d(samples, M, options.solver);
  } else {
    const Assembly1D sys = assemble_1d(samples.points, samples.weights, samples.values, M, options.moments);
    res = detail::solve_normal_1d(sys.op, sys.rhs, options.solver);
  }
  FitResult1D out{CosinePoly1D(std::move(res.x)), std::move(res.report)};
  detail::attach_condition_info(out.report, samples, M);
  return out;
}

FitResult2D fit_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const FitOptions& options) {
  if ((Mx + 1) * (My + 1) > samples.size()) {
    throw InvalidArgument("fit_2d: " + std::to_string((Mx + 1) * (My + 1)) + " coefficients exceed the sample count " +
                          std::to_string(samples.size()));
  }
  options.solver.validate();
  return detail::solve_2d(samples, Mx, My, options);
}

namespace {

Residual accumulate_residual(std::span<const double> p, std::span<const double> s, std::span<const double> w) {
  Residual res;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double d = p[j] - s[j];
    res.weighted_sq_residual += w[j] * d * d;
    res.weighted_abs_residual += w[j] * std::abs(d);
    res.weighted_value_norm += w[j] * s[j] * s[j];
  }
  return res;
}

}  // namespace

Residual residual(const SampleSet1D& samples, const CosinePoly1D& poly) {
  const Evaluation e = eval_poly(poly, samples.points.points());
  return accumulate_residual(e.values, samples.values, samples.weights);
}

Residual residual(const SampleSet2D& samples, const CosinePoly2D& poly) {
  const Evaluation e = eval_poly_2d(poly, samples.points.x(), samples.points.y());
  return accumulate_residual(e.values, samples.values, samples.weights);
}

}  // namespace cosfit
