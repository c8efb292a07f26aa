#pragma once

// Data-parallel inner loops used by the nonuniform cosine sums, polynomial
// evaluation and the conjugate-gradient vector updates.
//
// Every kernel has a scalar reference implementation. Vectorized variants
// (currently AVX2+FMA on x86-64) are compiled into separate translation units
// and selected at runtime from the CPU feature bits. The environment variable
// COSFIT_SIMD=scalar|avx2 overrides the automatic choice.
//
// The scalar variants evaluate every cosine directly; the vectorized variants
// use an angle-addition recurrence reseeded from exact values every
// kReseedInterval steps, so both agree to a few ulps times the interval.

#include <cstddef>
#include <span>
#include <string_view>

namespace cosfit::simd {

enum class Backend { scalar, avx2 };

inline constexpr std::size_t kReseedInterval = 32;

struct Kernels {
  Backend backend;
  std::string_view name;

  // out[i] = sum_j v[j] cos(pi (k0 + i) x[j]),  i < out.size()
  void (*cosine_moments)(std::span<const double> x, std::span<const double> v, std::size_t k0,
                         std::span<double> out);

  // out[j] = sum_k c[k] cos(pi k t[j])
  void (*cosine_synthesis)(std::span<const double> c, std::span<const double> t, std::span<double> out);

  // table[k * x.size() + j] = cos(pi k x[j]),  k < count
  void (*cosine_table)(std::span<const double> x, std::size_t count, std::span<double> table);

  double (*dot)(std::span<const double> a, std::span<const double> b);

  // y += alpha * x
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);

  // y = x + beta * y
  void (*xpby)(std::span<const double> x, double beta, std::span<double> y);

  // out[i] = a[i] * b[i]
  void (*multiply)(std::span<const double> a, std::span<const double> b, std::span<double> out);

  // acc[i] += a[i] * b[i]
  void (*multiply_add)(std::span<const double> a, std::span<const double> b, std::span<double> acc);
};

const Kernels& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const Kernels* avx2_kernels();

/// Kernels used by the library. Chosen on first use.
const Kernels& active();

/// Force a backend. Throws InvalidArgument if it is unavailable.
void select(Backend backend);

/// cos(pi k x) with the phase k*x reduced modulo 2 first.
double cos_pi_multiple(std::size_t k, double x);

}  // namespace cosfit::simd
