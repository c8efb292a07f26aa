#pragma once

// Nonuniform cosine sums and cosine-polynomial evaluation.
//
//   cosine_sums:    g_k = sum_j v_j cos(pi k x_j)
//   cosine_sums_2d: g_{k,l} = sum_j v_j cos(pi k x_j) cos(pi l y_j)
//
// The sums are returned raw (no 1/sqrt(2) factors); the scaled basis lives in
// CosinePoly1D / CosinePoly2D. Summation is exact direct summation by default;
// an approximate gridded path is available through MomentOptions.

#include <cstddef>
#include <span>
#include <vector>

#include "cosfit/array2d.hpp"

namespace cosfit {

/// Strictly increasing sampling points in [0, 1].
class PointSet1D {
 public:
  explicit PointSet1D(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t j) const { return points_[j]; }

 private:
  std::vector<double> points_;
};

/// Pairwise distinct sampling points in [0, 1]^2, stored as separate x/y arrays.
class PointSet2D {
 public:
  PointSet2D(std::vector<double> x, std::vector<double> y);

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// p(x) = c_0/sqrt(2) + sum_{k=1}^{M} c_k cos(pi k x)
class CosinePoly1D {
 public:
  CosinePoly1D() = default;
  explicit CosinePoly1D(std::vector<double> coeffs);

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }

  // Coefficients of the unscaled cosine series (c_0 divided by sqrt(2)).
  std::vector<double> raw_series() const;

 private:
  std::vector<double> coeffs_{0.0};
};

/// p(x, y) = c_{0,0}/sqrt(2) + sum_{(k,l) != (0,0)} c_{k,l} cos(pi k x) cos(pi l y)
///
/// Coefficients are stacked with the x-degree fastest: index l * (Mx + 1) + k.
class CosinePoly2D {
 public:
  CosinePoly2D() = default;
  CosinePoly2D(std::size_t degree_x, std::size_t degree_y, std::vector<double> coeffs);
  CosinePoly2D(std::size_t degree_x, std::size_t degree_y);

  std::size_t degree_x() const { return mx_; }
  std::size_t degree_y() const { return my_; }
  std::size_t size() const { return coeffs_.size(); }

  double operator()(std::size_t k, std::size_t l) const { return coeffs_[l * (mx_ + 1) + k]; }
  double& operator()(std::size_t k, std::size_t l) { return coeffs_[l * (mx_ + 1) + k]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  // (My+1) x (Mx+1) array of the unscaled series, row l, column k.
  Array2D raw_series() const;

 private:
  std::size_t mx_ = 0;
  std::size_t my_ = 0;
  std::vector<double> coeffs_{0.0};
};

enum class MomentMethod { exact, gridded };

struct MomentOptions {
  MomentMethod method = MomentMethod::exact;
  // Target accuracy of the gridded path, relative to sum_j |v_j|.
  double tolerance = 1e-7;
  // Grid oversampling factor (> 1) of the gridded path.
  double oversampling = 2.0;
  // Window half-width in grid cells; 0 picks it from the tolerance.
  std::size_t half_width = 0;
};

/// g_k for k = 0..K.  O(K r) in the exact mode.
std::vector<double> cosine_sums(const PointSet1D& pts, std::span<const double> v, std::size_t K,
                                const MomentOptions& options = {});

/// g_k for k = k_begin..k_end-1 (exact summation); used to extend moment sequences.
std::vector<double> cosine_sums_range(std::span<const double> x, std::span<const double> v, std::size_t k_begin,
                                      std::size_t k_end);

/// (Ky+1) x (Kx+1) array G with G(l, k) = g_{k,l}.
Array2D cosine_sums_2d(const PointSet2D& pts, std::span<const double> v, std::size_t Kx, std::size_t Ky,
                       const MomentOptions& options = {});

/// Gridded approximations (exposed for testing; normally reached through MomentOptions).
std::vector<double> cosine_sums_gridded(std::span<const double> x, std::span<const double> v, std::size_t K,
                                        const MomentOptions& options);
Array2D cosine_sums_2d_gridded(std::span<const double> x, std::span<const double> y, std::span<const double> v,
                               std::size_t Kx, std::size_t Ky, const MomentOptions& options);

struct Evaluation {
  std::vector<double> values;
  // Number of evaluation points outside [0, 1] (evaluated by the same formula).
  std::size_t out_of_range = 0;
};

/// p(t_l) at arbitrary points. Points forming the uniform grid l/L are routed
/// through the DCT-I.
Evaluation eval_poly(const CosinePoly1D& poly, std::span<const double> t);

/// p(l/L), l = 0..L, via one DCT-I of length L+1.
std::vector<double> eval_poly_grid(const CosinePoly1D& poly, std::size_t L);

/// p(x_j, y_j) at arbitrary points.
Evaluation eval_poly_2d(const CosinePoly2D& poly, std::span<const double> x, std::span<const double> y);

/// (Ly+1) x (Lx+1) array with entry (i, k) = p(k/Lx, i/Ly), via a 2D DCT-I.
Array2D eval_poly_2d_grid(const CosinePoly2D& poly, std::size_t Lx, std::size_t Ly);

}  // namespace cosfit
