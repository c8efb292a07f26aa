#include "cosfit/dct.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>

#include "cosfit/error.hpp"

namespace cosfit::dct {
namespace {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per length under a lock and kept for the process
// lifetime; after creation they are only read.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan redft00(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    double* in = fftw_alloc_real(n);
    double* out = fftw_alloc_real(n);
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in, out, FFTW_REDFT00,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw NumericalError("dct: FFTW failed to plan REDFT00 of length " + std::to_string(n));
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void check_signal(std::span<const double> x, const char* who) {
  if (x.size() < 2) throw InvalidArgument(std::string(who) + ": length must be >= 2");
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(who) + ": non-finite input");
  }
}

// Unnormalized DCT-I: y_k = x_0 + (-1)^k x_{n-1} + 2 sum_{l=1}^{n-2} x_l cos(pi k l/(n-1)).
// Equals sqrt(2n-2) C^T x. `work` is overwritten.
void redft00(std::vector<double>& work, std::span<double> out) {
  fftw_execute_r2r(plan_cache().redft00(work.size()), work.data(), out.data());
}

}  // namespace

std::vector<double> edge_scaling(std::size_t n) {
  if (n < 2) throw InvalidArgument("edge_scaling: order must be >= 2");
  std::vector<double> d(n, 1.0);
  d.front() = 2.0;
  d.back() = 2.0;
  return d;
}

std::vector<double> dct1_transpose_apply(std::span<const double> x) {
  check_signal(x, "dct1_transpose_apply");
  const std::size_t n = x.size();
  std::vector<double> work(x.begin(), x.end());
  std::vector<double> y(n);
  redft00(work, y);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n) - 2.0);
  for (double& v : y) v *= scale;
  return y;
}

std::vector<double> dct1_apply(std::span<const double> x) {
  check_signal(x, "dct1_apply");
  const std::size_t n = x.size();
  // C x = D1^{-1} C^T D1 x
  std::vector<double> work(x.begin(), x.end());
  work.front() *= 2.0;
  work.back() *= 2.0;
  std::vector<double> y(n);
  redft00(work, y);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n) - 2.0);
  for (double& v : y) v *= scale;
  y.front() *= 0.5;
  y.back() *= 0.5;
  return y;
}

Array2D dct1_matrix(std::size_t n) {
  if (n < 2) throw InvalidArgument("dct1_matrix: order must be >= 2");
  Array2D c(n, n);
  const double norm = 1.0 / std::sqrt(2.0 * static_cast<double>(n) - 2.0);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double edge = (k == 0 || k == n - 1) ? 1.0 : 2.0;
    for (std::size_t l = 0; l < n; ++l) {
      // Reduce k*l modulo 2(n-1) so the cosine argument stays in [0, 2pi).
      const std::size_t phase = (k * l) % (2 * (n - 1));
      c(k, l) = edge * norm * std::cos(std::numbers::pi * static_cast<double>(phase) / denom);
    }
  }
  return c;
}

namespace {

template <class Transform>
Array2D separable(const Array2D& x, Transform&& transform, const char* who) {
  if (x.rows() < 2 || x.cols() < 2) throw InvalidArgument(std::string(who) + ": both dimensions must be >= 2");
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  Array2D y(m, n);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = x(i, j);
    const std::vector<double> t = transform(column);
    for (std::size_t i = 0; i < m; ++i) y(i, j) = t[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double> t = transform(y.row(i));
    std::copy(t.begin(), t.end(), y.row(i).begin());
  }
  return y;
}

}  // namespace

Array2D dct2d_apply(const Array2D& x) {
  return separable(x, [](std::span<const double> v) { return dct1_apply(v); }, "dct2d_apply");
}

Array2D dct2d_transpose_apply(const Array2D& x) {
  return separable(x, [](std::span<const double> v) { return dct1_transpose_apply(v); }, "dct2d_transpose_apply");
}

}  // namespace cosfit::dct
