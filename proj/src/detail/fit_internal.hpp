#pragma once

// Pieces shared between the single-degree fits and the multilevel driver.

#include "cosfit/approx.hpp"

namespace cosfit::detail {

void attach_condition_info(SolveReport& report, const SampleSet1D& samples, std::size_t M);

SolveResult solve_normal_1d(const THOperator& op, std::span<const double> rhs, const SolverConfig& cfg);
SolveResult solve_direct_1d(const SampleSet1D& samples, std::size_t M, const SolverConfig& cfg);
SolveResult solve_direct_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const SolverConfig& cfg);
FitResult2D solve_2d(const SampleSet2D& samples, std::size_t Mx, std::size_t My, const FitOptions& options);

}  // namespace cosfit::detail
