#pragma once

// Weighted least-squares approximation by cosine polynomials:
//
//   min_{p in P_M} sum_j w_j |p(x_j) - s_j|^2
//
// solved through the structured normal equations (CG) or directly on the
// sampling matrix (LSQR), plus the multilevel degree search.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cosfit/nudct.hpp"
#include "cosfit/solver.hpp"
#include "cosfit/th_operator.hpp"

namespace cosfit {

struct SampleSet1D {
  PointSet1D points;
  std::vector<double> values;
  std::vector<double> weights;

  SampleSet1D(PointSet1D pts, std::vector<double> values, std::vector<double> weights);
  std::size_t size() const { return points.size(); }
};

struct SampleSet2D {
  PointSet2D points;
  std::vector<double> values;
  std::vector<double> weights;

  SampleSet2D(PointSet2D pts, std::vector<double> values, std::vector<double> weights);
  std::size_t size() const { return points.size(); }
};

/// w_j = (x_{j+1} - x_{j-1}) / 2 with ghosts x_0 = -x_1, x_{r+1} = 2 - x_r.
std::vector<double> midpoint_weights(const PointSet1D& pts);

/// w_j = 1 / r.
std::vector<double> uniform_weights(std::size_t r);

/// Sample set with midpoint weights.
SampleSet1D make_samples(std::vector<double> x, std::vector<double> values);

/// Sample set with uniform weights.
SampleSet2D make_samples(std::vector<double> x, std::vector<double> y, std::vector<double> values);

enum class FitPath { normal_equations, direct_ls };

struct FitOptions {
  FitPath path = FitPath::normal_equations;
  MomentOptions moments;
  SolverConfig solver;
  // 2D normal equations only: after solving, run a short CG on a random
  // right-hand side to expose a singular A. The data right-hand side always
  // lies in the range of A, so the main solve alone cannot see a null space.
  bool rank_probe = true;
};

struct FitResult1D {
  CosinePoly1D poly;
  SolveReport report;
};

enum class FitStatus { ok, rank_deficient };

struct FitResult2D {
  CosinePoly2D poly;
  SolveReport report;
  FitStatus status = FitStatus::ok;
};

/// Requires M < r. Non-convergence is reported, not thrown.
FitResult1D fit_1d(const SampleSet1D& samples, std::size_t M, const FitOptions& options = {});

/// Requires (Mx+1)(My+1) <= r. A singular system yields status rank_deficient.
FitResult2D fit_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const FitOptions& options = {});

struct Residual {
  double weighted_sq_residual = 0.0;  // sum_j w_j |p(x_j) - s_j|^2
  double weighted_value_norm = 0.0;   // sum_j w_j |s_j|^2
  double weighted_abs_residual = 0.0; // sum_j w_j |p(x_j) - s_j|
};

Residual residual(const SampleSet1D& samples, const CosinePoly1D& poly);
Residual residual(const SampleSet2D& samples, const CosinePoly2D& poly);

// ------------------------------------------------------------ multilevel

enum class DiscrepancyForm {
  squared,  // sum w |p - s|^2 <= eps sum w |s|^2
  literal   // sum w |p - s|   <= eps sum w |s|^2
};

struct MultilevelOptions {
  double epsilon = 0.0;          // required, > 0
  std::size_t start_degree = 1;
  std::size_t step = 1;
  std::size_t max_degree = 0;    // 0 means r - 1 (1D) / largest admissible (2D)
  DiscrepancyForm form = DiscrepancyForm::squared;
  bool warm_start = true;
  FitOptions fit;
};

struct LevelRecord {
  std::size_t degree = 0;
  std::size_t iterations = 0;
  double weighted_residual = 0.0;  // the quantity compared against the threshold
  double threshold = 0.0;
  bool accepted = false;
};

struct MultilevelResult1D {
  CosinePoly1D poly;
  std::vector<LevelRecord> trace;
  SolveReport report;  // solver report of the returned level
  bool accepted = false;
};

struct MultilevelResult2D {
  CosinePoly2D poly;
  std::vector<LevelRecord> trace;
  SolveReport report;
  bool accepted = false;
};

MultilevelResult1D multilevel_fit(const SampleSet1D& samples, const MultilevelOptions& options);
MultilevelResult2D multilevel_fit(const SampleSet2D& samples, const MultilevelOptions& options);

std::string to_string(SolveStatus status);

}  // namespace cosfit
