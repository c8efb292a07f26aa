#pragma once

// Krylov solvers with operator-only access, plus the a priori condition
// bound for midpoint-weighted 1D systems and the classical CG error envelope.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cosfit {

/// y = Op x. Must not resize y.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct SolverConfig {
  double tol = 1e-8;                     // relative l2 residual
  std::optional<std::size_t> max_iter;   // default 4 * n
  std::vector<double> x0;                // warm start; empty means zero

  void validate() const;
};

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveReport {
  std::size_t iterations = 0;
  std::vector<double> residual_history;  // relative residuals, entry 0 is the initial one
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  std::string diagnostic;
  std::optional<double> kappa_bound;
  std::vector<double> predicted_error_curve;  // relative error envelope per iteration
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Conjugate gradients for a symmetric positive definite operator. Stops when
/// ||b - A x|| <= tol ||b||. Detected loss of positive definiteness stops the
/// iteration with status `breakdown` and the current iterate.
SolveResult cg_solve(const LinearOperator& apply, std::span<const double> b, const SolverConfig& cfg = {});

/// LSQR for min ||V c - s||, V given by its action and the action of V^T.
/// `cols` is the number of unknowns. The pair is checked for adjointness on
/// random vectors before iterating (NumericalError on failure). Stops when
/// ||V^T r|| <= tol ||V^T s|| or ||r|| <= tol ||s||.
SolveResult lsqr_solve(const LinearOperator& apply_v, const LinearOperator& apply_vt, std::size_t rows,
                       std::size_t cols, std::span<const double> s, const SolverConfig& cfg = {});

/// Largest gap between consecutive points including the reflected ghosts
/// x_0 = -x_1 and x_{r+1} = 2 - x_r. Points must be sorted.
double max_gap(std::span<const double> sorted_points);

/// ((1 + delta M) / (1 - delta M))^2 if delta M < 1, nothing otherwise.
std::optional<double> condition_bound(double delta, std::size_t M);

/// 2 kappa ((sqrt kappa - 1)/(sqrt kappa + 1))^n e0
double cg_error_predictor(double kappa, double e0, std::size_t n);

/// Smallest n with cg_error_predictor(kappa, 1, n) <= tol.
std::size_t cg_predicted_iterations(double kappa, double tol);

}  // namespace cosfit
