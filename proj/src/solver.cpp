#include "cosfit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cosfit/error.hpp"
#include "cosfit/simd/kernels.hpp"

namespace cosfit {

void SolverConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("SolverConfig: tol must be positive");
  if (max_iter && *max_iter < 1) throw InvalidArgument("SolverConfig: max_iter must be >= 1");
}

namespace {

double norm2(std::span<const double> v) { return std::sqrt(simd::active().dot(v, v)); }

void check_finite(std::span<const double> v, const char* who) {
  for (double e : v) {
    if (!std::isfinite(e)) throw InvalidArgument(std::string(who) + ": non-finite right-hand side");
  }
}

}  // namespace

SolveResult cg_solve(const LinearOperator& apply, std::span<const double> b, const SolverConfig& cfg) {
  cfg.validate();
  check_finite(b, "cg_solve");
  const std::size_t n = b.size();
  const auto& kern = simd::active();
  const std::size_t max_iter = cfg.max_iter.value_or(4 * std::max<std::size_t>(n, 1));

  SolveResult res;
  res.x.assign(n, 0.0);
  SolveReport& rep = res.report;

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    rep.residual_history = {0.0};
    return res;
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> q(n);
  if (!cfg.x0.empty()) {
    if (cfg.x0.size() != n) throw InvalidArgument("cg_solve: warm start has the wrong length");
    res.x = cfg.x0;
    apply(res.x, q);
    kern.axpy(-1.0, q, r);
  }
  std::vector<double> p = r;
  double rr = kern.dot(r, r);
  rep.residual_history.push_back(std::sqrt(rr) / bnorm);
  if (std::sqrt(rr) <= cfg.tol * bnorm) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    return res;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double max_rayleigh = 0.0;
  while (rep.iterations < max_iter) {
    apply(p, q);
    const double pq = kern.dot(p, q);
    const double pp = kern.dot(p, p);
    max_rayleigh = std::max(max_rayleigh, pq / pp);
    if (!(pq > 64.0 * eps * pp * max_rayleigh)) {
      rep.status = SolveStatus::breakdown;
      rep.diagnostic = "p^T A p = " + std::to_string(pq) + " is not positive (operator singular or indefinite)";
      return res;
    }
    const double alpha = rr / pq;
    kern.axpy(alpha, p, res.x);
    kern.axpy(-alpha, q, r);
    const double rr_new = kern.dot(r, r);
    ++rep.iterations;
    rep.residual_history.push_back(std::sqrt(rr_new) / bnorm);
    if (std::sqrt(rr_new) <= cfg.tol * bnorm) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      return res;
    }
    kern.xpby(r, rr_new / rr, p);
    rr = rr_new;
  }
  rep.status = SolveStatus::max_iterations;
  return res;
}

SolveResult lsqr_solve(const LinearOperator& apply_v, const LinearOperator& apply_vt, std::size_t rows,
                       std::size_t cols, std::span<const double> s, const SolverConfig& cfg) {
  cfg.validate();
  check_finite(s, "lsqr_solve");
  if (s.size() != rows) throw InvalidArgument("lsqr_solve: right-hand side length does not match rows");
  const auto& kern = simd::active();

  // Adjoint consistency: <V x, y> == <x, V^T y>.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    std::vector<double> x(cols), y(rows), vx(rows), vty(cols);
    for (double& e : x) e = nd(rng);
    for (double& e : y) e = nd(rng);
    apply_v(x, vx);
    apply_vt(y, vty);
    const double lhs = kern.dot(vx, y);
    const double rhs = kern.dot(x, vty);
    const double scale = norm2(vx) * norm2(y) + norm2(x) * norm2(vty);
    if (std::abs(lhs - rhs) > 1e-10 * std::max(scale, std::numeric_limits<double>::min())) {
      throw NumericalError("lsqr_solve: operator pair failed the adjoint consistency check");
    }
  }

  const std::size_t max_iter = cfg.max_iter.value_or(4 * std::max<std::size_t>(cols, 1));
  SolveResult res;
  res.x.assign(cols, 0.0);
  SolveReport& rep = res.report;

  // u = s - V x0
  std::vector<double> u(s.begin(), s.end());
  std::vector<double> tmp_r(rows), tmp_c(cols);
  if (!cfg.x0.empty()) {
    if (cfg.x0.size() != cols) throw InvalidArgument("lsqr_solve: warm start has the wrong length");
    res.x = cfg.x0;
    apply_v(res.x, tmp_r);
    kern.axpy(-1.0, tmp_r, u);
  }
  const double snorm = norm2(s);
  apply_vt(s, tmp_c);
  const double vts_norm = norm2(tmp_c);
  if (snorm == 0.0 || vts_norm == 0.0) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    rep.residual_history = {0.0};
    if (snorm == 0.0) std::fill(res.x.begin(), res.x.end(), 0.0);
    return res;
  }

  double beta = norm2(u);
  std::vector<double> v(cols, 0.0);
  double alpha = 0.0;
  if (beta > 0.0) {
    for (double& e : u) e /= beta;
    apply_vt(u, v);
    alpha = norm2(v);
  }
  if (alpha > 0.0) {
    for (double& e : v) e /= alpha;
  }
  rep.residual_history.push_back(alpha * beta / vts_norm);
  if (beta <= cfg.tol * snorm || alpha * beta <= cfg.tol * vts_norm) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    return res;
  }

  std::vector<double> w = v;
  double phibar = beta;
  double rhobar = alpha;
  while (rep.iterations < max_iter) {
    // Bidiagonalization step.
    apply_v(v, tmp_r);
    kern.xpby(tmp_r, -alpha, u);
    beta = norm2(u);
    if (beta > 0.0) {
      for (double& e : u) e /= beta;
      apply_vt(u, tmp_c);
      kern.xpby(tmp_c, -beta, v);
      alpha = norm2(v);
      if (alpha > 0.0) {
        for (double& e : v) e /= alpha;
      }
    }
    // Plane rotation.
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = sn * phibar;

    kern.axpy(phi / rho, w, res.x);
    kern.xpby(v, -theta / rho, w);
    ++rep.iterations;

    const double normal_residual = phibar * alpha * std::abs(c);
    rep.residual_history.push_back(normal_residual / vts_norm);
    if (phibar <= cfg.tol * snorm || normal_residual <= cfg.tol * vts_norm) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      return res;
    }
  }
  rep.status = SolveStatus::max_iterations;
  return res;
}

double max_gap(std::span<const double> pts) {
  if (pts.empty()) throw InvalidArgument("max_gap: at least one point required");
  double gap = std::max(2.0 * pts.front(), 2.0 * (1.0 - pts.back()));
  for (std::size_t j = 1; j < pts.size(); ++j) {
    if (pts[j] < pts[j - 1]) throw InvalidArgument("max_gap: points must be sorted");
    gap = std::max(gap, pts[j] - pts[j - 1]);
  }
  return gap;
}

std::optional<double> condition_bound(double delta, std::size_t M) {
  if (!(delta > 0.0)) throw InvalidArgument("condition_bound: delta must be positive");
  const double dm = delta * static_cast<double>(M);
  if (dm >= 1.0) return std::nullopt;
  const double q = (1.0 + dm) / (1.0 - dm);
  return q * q;
}

double cg_error_predictor(double kappa, double e0, std::size_t n) {
  if (kappa < 1.0) throw InvalidArgument("cg_error_predictor: kappa must be >= 1");
  if (e0 < 0.0) throw InvalidArgument("cg_error_predictor: e0 must be >= 0");
  const double sk = std::sqrt(kappa);
  const double rate = (sk - 1.0) / (sk + 1.0);
  return 2.0 * kappa * std::pow(rate, static_cast<double>(n)) * e0;
}

std::size_t cg_predicted_iterations(double kappa, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("cg_predicted_iterations: tol must be positive");
  if (kappa <= 1.0) return 1;
  const double sk = std::sqrt(kappa);
  const double rate = (sk - 1.0) / (sk + 1.0);
  // 2 kappa rate^n <= tol
  const double n = std::log(tol / (2.0 * kappa)) / std::log(rate);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(n)));
}

}  // namespace cosfit
