#include <cmath>
#include <numbers>

#include "cosfit/simd/kernels.hpp"

namespace cosfit::simd {

double cos_pi_multiple(std::size_t k, double x) {
  const double phase = std::fmod(static_cast<double>(k) * x, 2.0);
  return std::cos(std::numbers::pi * phase);
}

namespace {

void moments(std::span<const double> x, std::span<const double> v, std::size_t k0, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t k = k0 + i;
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += v[j] * cos_pi_multiple(k, x[j]);
    out[i] = acc;
  }
}

void synthesis(std::span<const double> c, std::span<const double> t, std::span<double> out) {
  for (std::size_t j = 0; j < t.size(); ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * cos_pi_multiple(k, t[j]);
    out[j] = acc;
  }
}

void table(std::span<const double> x, std::size_t count, std::span<double> tab) {
  const std::size_t r = x.size();
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t j = 0; j < r; ++j) tab[k * r + j] = cos_pi_multiple(k, x[j]);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<double> acc) {
  for (std::size_t i = 0; i < a.size(); ++i) acc[i] += a[i] * b[i];
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Backend::scalar, "scalar", moments, synthesis, table, dot, axpy, xpby, multiply, multiply_add};
  return k;
}

}  // namespace cosfit::simd
