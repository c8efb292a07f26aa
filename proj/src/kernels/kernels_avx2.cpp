// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and must only be
// entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cosfit/simd/kernels.hpp"

namespace cosfit::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Exact cos/sin of pi*k*x for each lane.
inline void seed(std::size_t k, const double* xs, __m256d& c, __m256d& s) {
  alignas(32) double cv[kLanes];
  alignas(32) double sv[kLanes];
  for (std::size_t l = 0; l < kLanes; ++l) {
    const double phase = std::numbers::pi * std::fmod(static_cast<double>(k) * xs[l], 2.0);
    cv[l] = std::cos(phase);
    sv[l] = std::sin(phase);
  }
  c = _mm256_load_pd(cv);
  s = _mm256_load_pd(sv);
}

// Rotate (c, s) by the per-lane angle whose cos/sin are (c1, s1).
inline void rotate(__m256d& c, __m256d& s, __m256d c1, __m256d s1) {
  const __m256d cn = _mm256_fmsub_pd(c, c1, _mm256_mul_pd(s, s1));
  const __m256d sn = _mm256_fmadd_pd(s, c1, _mm256_mul_pd(c, s1));
  c = cn;
  s = sn;
}

// Gathers up to four values from `src` starting at j, padding with `fill`.
inline void load_block(std::span<const double> src, std::size_t j, double fill, double* dst) {
  for (std::size_t l = 0; l < kLanes; ++l) dst[l] = (j + l < src.size()) ? src[j + l] : fill;
}

void moments(std::span<const double> x, std::span<const double> v, std::size_t k0, std::span<double> out) {
  const std::size_t count = out.size();
  std::vector<double> acc(kLanes * count, 0.0);
  alignas(32) double xs[kLanes];
  alignas(32) double vs[kLanes];
  for (std::size_t j = 0; j < x.size(); j += kLanes) {
    load_block(x, j, 0.0, xs);
    load_block(v, j, 0.0, vs);
    const __m256d vv = _mm256_load_pd(vs);
    __m256d c1, s1;
    seed(1, xs, c1, s1);
    for (std::size_t i0 = 0; i0 < count; i0 += kReseedInterval) {
      __m256d c, s;
      seed(k0 + i0, xs, c, s);
      const std::size_t i1 = std::min(count, i0 + kReseedInterval);
      for (std::size_t i = i0; i < i1; ++i) {
        double* a = acc.data() + kLanes * i;
        _mm256_storeu_pd(a, _mm256_fmadd_pd(vv, c, _mm256_loadu_pd(a)));
        rotate(c, s, c1, s1);
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i) out[i] = hsum(_mm256_loadu_pd(acc.data() + kLanes * i));
}

void synthesis(std::span<const double> c, std::span<const double> t, std::span<double> out) {
  alignas(32) double ts[kLanes];
  alignas(32) double res[kLanes];
  for (std::size_t j = 0; j < t.size(); j += kLanes) {
    load_block(t, j, 0.0, ts);
    __m256d c1, s1;
    seed(1, ts, c1, s1);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k0 = 0; k0 < c.size(); k0 += kReseedInterval) {
      __m256d cv, sv;
      seed(k0, ts, cv, sv);
      const std::size_t k1 = std::min(c.size(), k0 + kReseedInterval);
      for (std::size_t k = k0; k < k1; ++k) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(c[k]), cv, acc);
        rotate(cv, sv, c1, s1);
      }
    }
    _mm256_store_pd(res, acc);
    const std::size_t lanes = std::min(kLanes, t.size() - j);
    std::copy(res, res + lanes, out.begin() + static_cast<std::ptrdiff_t>(j));
  }
}

void table(std::span<const double> x, std::size_t count, std::span<double> tab) {
  const std::size_t r = x.size();
  alignas(32) double xs[kLanes];
  alignas(32) double res[kLanes];
  for (std::size_t j = 0; j < r; j += kLanes) {
    load_block(x, j, 0.0, xs);
    const std::size_t lanes = std::min(kLanes, r - j);
    __m256d c1, s1;
    seed(1, xs, c1, s1);
    for (std::size_t k0 = 0; k0 < count; k0 += kReseedInterval) {
      __m256d cv, sv;
      seed(k0, xs, cv, sv);
      const std::size_t k1 = std::min(count, k0 + kReseedInterval);
      for (std::size_t k = k0; k < k1; ++k) {
        double* dst = tab.data() + k * r + j;
        if (lanes == kLanes) {
          _mm256_storeu_pd(dst, cv);
        } else {
          _mm256_store_pd(res, cv);
          std::copy(res, res + lanes, dst);
        }
        rotate(cv, sv, c1, s1);
      }
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i + kLanes]), _mm256_loadu_pd(&b[i + kLanes]), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(vb, _mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&x[i])));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&out[i], _mm256_mul_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> acc) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(&acc[i], _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]),
                                              _mm256_loadu_pd(&acc[i])));
  }
  for (; i < n; ++i) acc[i] += a[i] * b[i];
}

}  // namespace

const Kernels& avx2_kernel_table() {
  static const Kernels k{Backend::avx2, "avx2", moments, synthesis, table, dot, axpy, xpby, multiply, multiply_add};
  return k;
}

}  // namespace cosfit::simd
