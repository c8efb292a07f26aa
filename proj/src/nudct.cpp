#include "cosfit/nudct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cosfit/dct.hpp"
#include "cosfit/error.hpp"
#include "cosfit/simd/kernels.hpp"

namespace cosfit {
namespace {

void require_finite(std::span<const double> v, const char* who) {
  for (double e : v) {
    if (!std::isfinite(e)) throw InvalidArgument(std::string(who) + ": non-finite value");
  }
}

// Index of cos(pi k l / L) after folding k into [0, L] by evenness and
// 2L-periodicity.
std::size_t fold(std::size_t k, std::size_t L) {
  const std::size_t m = k % (2 * L);
  return m > L ? 2 * L - m : m;
}

std::size_t count_outside(std::span<const double> t) {
  return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [](double v) { return v < 0.0 || v > 1.0; }));
}

// True if t is exactly the grid l/L, l = 0..L.
bool is_uniform_grid(std::span<const double> t) {
  if (t.size() < 2) return false;
  const std::size_t L = t.size() - 1;
  for (std::size_t l = 0; l <= L; ++l) {
    if (t[l] != static_cast<double>(l) / static_cast<double>(L)) return false;
  }
  return true;
}

}  // namespace

PointSet1D::PointSet1D(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("PointSet1D: at least one point required");
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const double x = points_[j];
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw InvalidArgument("PointSet1D: point " + std::to_string(j) + " outside [0, 1]");
    }
    if (j > 0 && !(points_[j - 1] < x)) {
      throw InvalidArgument("PointSet1D: points must be strictly increasing (index " + std::to_string(j) + ")");
    }
  }
}

PointSet2D::PointSet2D(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw InvalidArgument("PointSet2D: x and y lengths differ");
  if (x_.empty()) throw InvalidArgument("PointSet2D: at least one point required");
  for (std::size_t j = 0; j < x_.size(); ++j) {
    if (!std::isfinite(x_[j]) || !std::isfinite(y_[j]) || x_[j] < 0.0 || x_[j] > 1.0 || y_[j] < 0.0 ||
        y_[j] > 1.0) {
      throw InvalidArgument("PointSet2D: point " + std::to_string(j) + " outside the unit square");
    }
  }
  std::vector<std::size_t> order(x_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::pair(x_[a], y_[a]) < std::pair(x_[b], y_[b]); });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (x_[order[i]] == x_[order[i - 1]] && y_[order[i]] == y_[order[i - 1]]) {
      throw InvalidArgument("PointSet2D: duplicate point at indices " + std::to_string(order[i - 1]) + " and " +
                            std::to_string(order[i]));
    }
  }
}

CosinePoly1D::CosinePoly1D(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("CosinePoly1D: need at least one coefficient");
  require_finite(coeffs_, "CosinePoly1D");
}

std::vector<double> CosinePoly1D::raw_series() const {
  std::vector<double> a = coeffs_;
  a[0] /= std::numbers::sqrt2;
  return a;
}

CosinePoly2D::CosinePoly2D(std::size_t degree_x, std::size_t degree_y)
    : mx_(degree_x), my_(degree_y), coeffs_((degree_x + 1) * (degree_y + 1), 0.0) {}

CosinePoly2D::CosinePoly2D(std::size_t degree_x, std::size_t degree_y, std::vector<double> coeffs)
    : mx_(degree_x), my_(degree_y), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != (mx_ + 1) * (my_ + 1)) throw InvalidArgument("CosinePoly2D: coefficient count mismatch");
  require_finite(coeffs_, "CosinePoly2D");
}

Array2D CosinePoly2D::raw_series() const {
  Array2D a(my_ + 1, mx_ + 1, coeffs_);
  a(0, 0) /= std::numbers::sqrt2;
  return a;
}

std::vector<double> cosine_sums_range(std::span<const double> x, std::span<const double> v, std::size_t k_begin,
                                      std::size_t k_end) {
  if (v.size() != x.size()) throw InvalidArgument("cosine_sums: value count does not match point count");
  require_finite(v, "cosine_sums");
  if (k_end < k_begin) throw InvalidArgument("cosine_sums: empty or reversed range");
  std::vector<double> out(k_end - k_begin, 0.0);
  simd::active().cosine_moments(x, v, k_begin, out);
  return out;
}

std::vector<double> cosine_sums(const PointSet1D& pts, std::span<const double> v, std::size_t K,
                                const MomentOptions& options) {
  if (v.size() != pts.size()) throw InvalidArgument("cosine_sums: value count does not match point count");
  require_finite(v, "cosine_sums");
  if (options.method == MomentMethod::gridded) return cosine_sums_gridded(pts.points(), v, K, options);
  return cosine_sums_range(pts.points(), v, 0, K + 1);
}

Array2D cosine_sums_2d(const PointSet2D& pts, std::span<const double> v, std::size_t Kx, std::size_t Ky,
                       const MomentOptions& options) {
  if (v.size() != pts.size()) throw InvalidArgument("cosine_sums_2d: value count does not match point count");
  require_finite(v, "cosine_sums_2d");
  if (options.method == MomentMethod::gridded) return cosine_sums_2d_gridded(pts.x(), pts.y(), v, Kx, Ky, options);

  const auto& kern = simd::active();
  const std::size_t r = pts.size();
  std::vector<double> tx((Kx + 1) * r);
  std::vector<double> ty((Ky + 1) * r);
  kern.cosine_table(pts.x(), Kx + 1, tx);
  kern.cosine_table(pts.y(), Ky + 1, ty);

  Array2D g(Ky + 1, Kx + 1);
  std::vector<double> u(r);
  for (std::size_t k = 0; k <= Kx; ++k) {
    kern.multiply(v, std::span<const double>(tx).subspan(k * r, r), u);
    for (std::size_t l = 0; l <= Ky; ++l) g(l, k) = kern.dot(u, std::span<const double>(ty).subspan(l * r, r));
  }
  return g;
}

std::vector<double> eval_poly_grid(const CosinePoly1D& poly, std::size_t L) {
  if (L < 1) throw InvalidArgument("eval_poly_grid: L must be >= 1");
  const std::vector<double> a = poly.raw_series();
  const std::size_t n = L + 1;
  // p(l/L) = sum_m f_m cos(pi l m / L) = sqrt(2n-2) [C^T (D1 f / 2)]_l
  std::vector<double> f(n, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) f[fold(k, L)] += a[k];
  f.front() *= 2.0;
  f.back() *= 2.0;
  for (double& e : f) e *= 0.5;
  std::vector<double> p = dct::dct1_transpose_apply(f);
  const double scale = std::sqrt(2.0 * static_cast<double>(n) - 2.0);
  for (double& e : p) e *= scale;
  return p;
}

Evaluation eval_poly(const CosinePoly1D& poly, std::span<const double> t) {
  require_finite(t, "eval_poly");
  Evaluation out;
  out.out_of_range = count_outside(t);
  if (is_uniform_grid(t)) {
    out.values = eval_poly_grid(poly, t.size() - 1);
    return out;
  }
  const std::vector<double> a = poly.raw_series();
  out.values.assign(t.size(), 0.0);
  simd::active().cosine_synthesis(a, t, out.values);
  return out;
}

Evaluation eval_poly_2d(const CosinePoly2D& poly, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("eval_poly_2d: x and y lengths differ");
  require_finite(x, "eval_poly_2d");
  require_finite(y, "eval_poly_2d");
  Evaluation out;
  out.out_of_range = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0 || x[j] > 1.0 || y[j] < 0.0 || y[j] > 1.0) ++out.out_of_range;
  }

  const auto& kern = simd::active();
  const std::size_t r = x.size();
  const std::size_t nx = poly.degree_x() + 1;
  const std::size_t ny = poly.degree_y() + 1;
  const Array2D a = poly.raw_series();
  std::vector<double> tx(nx * r);
  std::vector<double> ty(ny * r);
  kern.cosine_table(x, nx, tx);
  kern.cosine_table(y, ny, ty);

  out.values.assign(r, 0.0);
  std::vector<double> inner(r);
  for (std::size_t l = 0; l < ny; ++l) {
    std::fill(inner.begin(), inner.end(), 0.0);
    for (std::size_t k = 0; k < nx; ++k) {
      if (a(l, k) != 0.0) kern.axpy(a(l, k), std::span<const double>(tx).subspan(k * r, r), inner);
    }
    kern.multiply_add(std::span<const double>(ty).subspan(l * r, r), inner, out.values);
  }
  return out;
}

Array2D eval_poly_2d_grid(const CosinePoly2D& poly, std::size_t Lx, std::size_t Ly) {
  if (Lx < 1 || Ly < 1) throw InvalidArgument("eval_poly_2d_grid: grid resolution must be >= 1");
  const Array2D a = poly.raw_series();
  Array2D f(Ly + 1, Lx + 1);
  for (std::size_t l = 0; l < a.rows(); ++l) {
    for (std::size_t k = 0; k < a.cols(); ++k) f(fold(l, Ly), fold(k, Lx)) += a(l, k);
  }
  for (std::size_t i = 0; i <= Ly; ++i) {
    const double si = (i == 0 || i == Ly) ? 1.0 : 0.5;
    for (std::size_t k = 0; k <= Lx; ++k) {
      const double sk = (k == 0 || k == Lx) ? 1.0 : 0.5;
      f(i, k) *= si * sk;
    }
  }
  Array2D p = dct::dct2d_transpose_apply(f);
  const double scale =
      std::sqrt(2.0 * static_cast<double>(Lx)) * std::sqrt(2.0 * static_cast<double>(Ly));
  for (double& e : p.values()) e *= scale;
  return p;
}

}  // namespace cosfit
