#pragma once

// Periodic trigonometric least squares, the comparison baseline.
//
// Real basis per axis with n (odd) functions:
//   1, cos(2 pi k x), sin(2 pi k x),  k = 1 .. (n-1)/2
// and tensor products in 2D. Solved densely (column-pivoted QR).

#include <cstddef>
#include <span>
#include <vector>

#include "cosfit/approx.hpp"
#include "cosfit/io.hpp"

namespace cosfit {

struct PeriodicFit1D {
  std::size_t n = 1;
  std::vector<double> coeffs;  // basis order as above
  std::size_t rank = 0;
  bool rank_deficient = false;

  std::vector<double> evaluate(std::span<const double> t) const;
};

struct PeriodicFit2D {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::vector<double> coeffs;  // index iy * nx + ix
  std::size_t rank = 0;
  bool rank_deficient = false;

  std::vector<double> evaluate(std::span<const double> x, std::span<const double> y) const;
};

/// Smallest odd count >= M + 1.
std::size_t default_periodic_count(std::size_t degree);

PeriodicFit1D periodic_fit(const SampleSet1D& samples, std::size_t n);
PeriodicFit2D periodic_fit(const SampleSet2D& samples, std::size_t nx, std::size_t ny);

io::GridField evaluate_on_grid(const PeriodicFit1D& fit, std::size_t L, const io::AxisMap& x_map = {});
io::GridField evaluate_on_grid(const PeriodicFit2D& fit, std::size_t Lx, std::size_t Ly,
                               const io::AxisMap& x_map = {}, const io::AxisMap& y_map = {});

}  // namespace cosfit
