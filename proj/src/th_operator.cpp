#include "cosfit/th_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "cosfit/dct.hpp"
#include "cosfit/error.hpp"
#include "cosfit/simd/kernels.hpp"

namespace cosfit {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void check_weights(std::span<const double> weights, std::span<const double> values, std::size_t r) {
  if (weights.size() != r || values.size() != r) {
    throw InvalidArgument("assemble: weights/values length does not match the point count");
  }
  for (std::size_t j = 0; j < r; ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      throw InvalidArgument("assemble: weight " + std::to_string(j) + " is not positive");
    }
    if (!std::isfinite(values[j])) throw InvalidArgument("assemble: value " + std::to_string(j) + " is not finite");
  }
}

void check_degree(std::size_t M) {
  if (M > (std::numeric_limits<std::size_t>::max() - 2) / 4) throw InvalidArgument("assemble: degree too large");
}

std::size_t resolve_padding(std::size_t degree, std::size_t requested, const char* who) {
  if (requested == 0) return default_padded_length(degree);
  if (requested < std::max<std::size_t>(2 * degree + 1, 2)) {
    throw InvalidArgument(std::string(who) + ": padded length must be >= 2M + 1");
  }
  return requested;
}

// C^T of the first column of the augmented matrix: 2 a_i for i <= 2M, zeros after.
std::vector<double> augmented_spectrum(std::span<const double> a, std::size_t degree, std::size_t n) {
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i <= 2 * degree; ++i) col[i] = 2.0 * a[i];
  return dct::dct1_transpose_apply(col);
}

// Transform of D1 x_aug for a vector x of length <= n.
std::vector<double> forward_embedded(std::span<const double> x, std::size_t n) {
  std::vector<double> aug(n, 0.0);
  std::copy(x.begin(), x.end(), aug.begin());
  aug.front() *= 2.0;
  aug.back() *= 2.0;
  return dct::dct1_transpose_apply(aug);
}

}  // namespace

std::size_t default_padded_length(std::size_t degree) {
  const std::size_t need = std::max<std::size_t>(2 * degree + 1, 2);
  std::size_t n = 2;  // 2^0 + 1
  while (n < need) n = 2 * n - 1;
  return n;
}

// ---------------------------------------------------------------- 1D

THOperator::THOperator(std::vector<double> gen, std::size_t padded_len) : gen_(std::move(gen)) {
  if (gen_.size() < 2 || gen_.size() % 2 != 0) throw InvalidArgument("THOperator: generating sequence must have length 2M + 2");
  for (double a : gen_) {
    if (!std::isfinite(a)) throw InvalidArgument("THOperator: non-finite generating value");
  }
  degree_ = gen_.size() / 2 - 1;
  padded_ = resolve_padding(degree_, padded_len, "THOperator");
  spectrum_ = augmented_spectrum(gen_, degree_, padded_);
}

void THOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != size() || y.size() != size()) throw InvalidArgument("THOperator::apply: length mismatch");
  std::vector<double> dx(x.begin(), x.end());
  dx[0] *= kInvSqrt2;
  std::vector<double> t = forward_embedded(dx, padded_);
  simd::active().multiply(t, spectrum_, t);
  const std::vector<double> yaug = dct::dct1_transpose_apply(t);
  const double scale = std::sqrt((static_cast<double>(padded_) - 1.0) / 2.0);
  for (std::size_t i = 0; i < size(); ++i) y[i] = scale * yaug[i];
  y[0] *= kInvSqrt2;
}

std::vector<double> THOperator::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

Array2D THOperator::dense(std::size_t max_order) const {
  if (size() > max_order) throw InvalidArgument("THOperator::dense: order exceeds the dense limit");
  const std::size_t n = size();
  Array2D a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t lag = k > l ? k - l : l - k;
      const double dk = k == 0 ? kInvSqrt2 : 1.0;
      const double dl = l == 0 ? kInvSqrt2 : 1.0;
      a(k, l) = dk * dl * (gen_[lag] + gen_[k + l]);
    }
  }
  return a;
}

Assembly1D assemble_1d(const PointSet1D& pts, std::span<const double> weights, std::span<const double> values,
                       std::size_t M, const MomentOptions& options, std::size_t padded_len) {
  check_degree(M);
  const std::size_t r = pts.size();
  check_weights(weights, values, r);

  std::vector<double> gen = cosine_sums(pts, weights, 2 * M + 1, options);
  for (double& a : gen) a *= 0.5;

  std::vector<double> ws(r);
  for (std::size_t j = 0; j < r; ++j) ws[j] = weights[j] * values[j];
  std::vector<double> rhs = cosine_sums(pts, ws, M, options);
  rhs[0] *= kInvSqrt2;

  return {THOperator(std::move(gen), padded_len), std::move(rhs)};
}

// ---------------------------------------------------------------- 2D

BlockTHOperator::BlockTHOperator(Array2D gen, std::size_t padded_x, std::size_t padded_y) : gen_(std::move(gen)) {
  if (gen_.rows() < 2 || gen_.cols() < 2 || gen_.rows() % 2 != 0 || gen_.cols() % 2 != 0) {
    throw InvalidArgument("BlockTHOperator: generating array must be (2My+2) x (2Mx+2)");
  }
  for (double g : gen_.values()) {
    if (!std::isfinite(g)) throw InvalidArgument("BlockTHOperator: non-finite generating value");
  }
  mx_ = gen_.cols() / 2 - 1;
  my_ = gen_.rows() / 2 - 1;
  nx_ = resolve_padding(mx_, padded_x, "BlockTHOperator");
  ny_ = resolve_padding(my_, padded_y, "BlockTHOperator");

  Array2D col(ny_, nx_);
  for (std::size_t q = 0; q <= 2 * my_; ++q) {
    for (std::size_t p = 0; p <= 2 * mx_; ++p) col(q, p) = 4.0 * gen_(q, p);
  }
  spectrum_ = dct::dct2d_transpose_apply(col);

  row_spectra_.reserve(2 * my_ + 1);
  for (std::size_t q = 0; q <= 2 * my_; ++q) row_spectra_.push_back(augmented_spectrum(gen_.row(q), mx_, nx_));
}

void BlockTHOperator::apply_tensor(std::span<const double> x, std::span<double> y) const {
  if (x.size() != size() || y.size() != size()) throw InvalidArgument("BlockTHOperator::apply: length mismatch");
  const std::size_t bx = mx_ + 1;
  Array2D aug(ny_, nx_);
  for (std::size_t l = 0; l <= my_; ++l) {
    for (std::size_t k = 0; k <= mx_; ++k) aug(l, k) = x[l * bx + k];
  }
  aug(0, 0) *= kInvSqrt2;
  // D1 (x) D1
  for (std::size_t k = 0; k < nx_; ++k) {
    aug(0, k) *= 2.0;
    aug(ny_ - 1, k) *= 2.0;
  }
  for (std::size_t l = 0; l < ny_; ++l) {
    aug(l, 0) *= 2.0;
    aug(l, nx_ - 1) *= 2.0;
  }
  Array2D t = dct::dct2d_transpose_apply(aug);
  simd::active().multiply(t.values(), spectrum_.values(), t.values());
  const Array2D yaug = dct::dct2d_transpose_apply(t);
  const double scale = std::sqrt((static_cast<double>(nx_) - 1.0) / 2.0) * std::sqrt((static_cast<double>(ny_) - 1.0) / 2.0);
  for (std::size_t l = 0; l <= my_; ++l) {
    for (std::size_t k = 0; k <= mx_; ++k) y[l * bx + k] = scale * yaug(l, k);
  }
  y[0] *= kInvSqrt2;
}

void BlockTHOperator::apply_blockwise(std::span<const double> x, std::span<double> y) const {
  if (x.size() != size() || y.size() != size()) throw InvalidArgument("BlockTHOperator::apply: length mismatch");
  const std::size_t bx = mx_ + 1;
  const auto& kern = simd::active();

  std::vector<double> dx(x.begin(), x.end());
  dx[0] *= kInvSqrt2;
  std::vector<std::vector<double>> fwd(my_ + 1);
  for (std::size_t l = 0; l <= my_; ++l) fwd[l] = forward_embedded(std::span<const double>(dx).subspan(l * bx, bx), nx_);

  // Block (l, l') is the 1D Toeplitz+Hankel matrix generated by G(l+l', .) + G(|l-l'|, .).
  const double scale = std::sqrt((static_cast<double>(nx_) - 1.0) / 2.0);
  std::vector<double> acc(nx_);
  for (std::size_t l = 0; l <= my_; ++l) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t lp = 0; lp <= my_; ++lp) {
      const std::size_t diff = l > lp ? l - lp : lp - l;
      kern.multiply_add(row_spectra_[l + lp], fwd[lp], acc);
      kern.multiply_add(row_spectra_[diff], fwd[lp], acc);
    }
    const std::vector<double> row = dct::dct1_transpose_apply(acc);
    for (std::size_t k = 0; k <= mx_; ++k) y[l * bx + k] = scale * row[k];
  }
  y[0] *= kInvSqrt2;
}

void BlockTHOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (block_fast_path_verified()) {
    apply_tensor(x, y);
  } else {
    apply_blockwise(x, y);
  }
}

std::vector<double> BlockTHOperator::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

Array2D BlockTHOperator::dense(std::size_t max_order) const {
  if (size() > max_order) throw InvalidArgument("BlockTHOperator::dense: order exceeds the dense limit");
  const std::size_t bx = mx_ + 1;
  const std::size_t n = size();
  Array2D a(n, n);
  auto lag = [](std::size_t u, std::size_t v) { return u > v ? u - v : v - u; };
  for (std::size_t l = 0; l <= my_; ++l) {
    for (std::size_t k = 0; k <= mx_; ++k) {
      const double e1 = (k == 0 && l == 0) ? kInvSqrt2 : 1.0;
      for (std::size_t lp = 0; lp <= my_; ++lp) {
        for (std::size_t kp = 0; kp <= mx_; ++kp) {
          const double e2 = (kp == 0 && lp == 0) ? kInvSqrt2 : 1.0;
          const double s = gen_(l + lp, k + kp) + gen_(l + lp, lag(k, kp)) + gen_(lag(l, lp), k + kp) +
                           gen_(lag(l, lp), lag(k, kp));
          a(l * bx + k, lp * bx + kp) = e1 * e2 * s;
        }
      }
    }
  }
  return a;
}

bool block_fast_path_verified() {
  static const bool ok = [] {
    std::mt19937_64 rng(20011);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Array2D g(2 * 3 + 2, 2 * 2 + 2);
    for (double& v : g.values()) v = unif(rng);
    const BlockTHOperator op(g);
    std::vector<double> x(op.size());
    for (double& v : x) v = unif(rng);
    std::vector<double> fast(op.size());
    op.apply_tensor(x, fast);
    const std::vector<double> ref = multiply(op.dense(), x);
    double err = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err = std::max(err, std::abs(fast[i] - ref[i]));
      norm = std::max(norm, std::abs(ref[i]));
    }
    return err <= 1e-10 * norm;
  }();
  return ok;
}

Assembly2D assemble_2d(const PointSet2D& pts, std::span<const double> weights, std::span<const double> values,
                       std::size_t Mx, std::size_t My, const MomentOptions& options) {
  check_degree(Mx);
  check_degree(My);
  const std::size_t r = pts.size();
  check_weights(weights, values, r);

  Array2D gen = cosine_sums_2d(pts, weights, 2 * Mx + 1, 2 * My + 1, options);
  for (double& g : gen.values()) g *= 0.25;

  std::vector<double> ws(r);
  for (std::size_t j = 0; j < r; ++j) ws[j] = weights[j] * values[j];
  const Array2D sums = cosine_sums_2d(pts, ws, Mx, My, options);
  std::vector<double> rhs(sums.values());
  rhs[0] *= kInvSqrt2;

  return {BlockTHOperator(std::move(gen)), std::move(rhs)};
}

}  // namespace cosfit
