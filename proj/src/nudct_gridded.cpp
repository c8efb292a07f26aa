// Approximate cosine sums by Gaussian gridding.
//
// The even, 2-periodic extension of the point masses v_j is convolved with a
// Gaussian window, sampled on an oversampled uniform grid over [0, 1],
// transformed with one unnormalized DCT-I and divided by the window's Fourier
// transform. Window width is chosen from the requested tolerance following
// the Greengard-Lee parameterization.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "cosfit/dct.hpp"
#include "cosfit/error.hpp"
#include "cosfit/nudct.hpp"

namespace cosfit {
namespace {

struct GridPlan {
  std::size_t cells;  // grid intervals on [0, 1]; grid has cells + 1 nodes
  std::size_t half_width;
  double h;
  double tau;  // window exp(-u^2 / (4 tau))
};

GridPlan plan_grid(std::size_t K, const MomentOptions& opt) {
  const double sigma = opt.oversampling;
  if (!(sigma > 1.0) || !std::isfinite(sigma)) throw InvalidArgument("gridded cosine sums: oversampling must be > 1");
  if (!(opt.tolerance > 0.0) || opt.tolerance >= 1.0) {
    throw InvalidArgument("gridded cosine sums: tolerance must be in (0, 1)");
  }
  std::size_t w = opt.half_width;
  if (w == 0) {
    const double decay = std::numbers::pi * (1.0 - 1.0 / (2.0 * sigma - 1.0));
    w = static_cast<std::size_t>(std::ceil(-std::log(opt.tolerance) / decay)) + 1;
    w = std::clamp<std::size_t>(w, 2, 64);
  }
  const auto wanted = static_cast<std::size_t>(std::ceil(sigma * static_cast<double>(std::max<std::size_t>(K, 1))));
  const std::size_t cells = std::bit_ceil(std::max({wanted, 2 * w + 2, std::size_t{8}}));
  GridPlan p;
  p.cells = cells;
  p.half_width = w;
  p.h = 1.0 / static_cast<double>(cells);
  p.tau = static_cast<double>(w) * sigma / (4.0 * std::numbers::pi * (sigma - 0.5)) * p.h * p.h;
  return p;
}

// Adds scale * window(u_n - xi) for all grid nodes near the images of x.
template <class Sink>
void spread_images(double x, const GridPlan& p, Sink&& sink) {
  const double images[3] = {x, -x, 2.0 - x};
  const double reach = static_cast<double>(p.half_width) * p.h;
  for (double xi : images) {
    const double lo = std::ceil((xi - reach) / p.h);
    const double hi = std::floor((xi + reach) / p.h);
    const auto n0 = static_cast<long>(std::max(lo, 0.0));
    const auto n1 = static_cast<long>(std::min(hi, static_cast<double>(p.cells)));
    for (long n = n0; n <= n1; ++n) {
      const double d = static_cast<double>(n) * p.h - xi;
      sink(static_cast<std::size_t>(n), std::exp(-d * d / (4.0 * p.tau)));
    }
  }
}

// h / window_hat(pi k),  window_hat(w) = sqrt(4 pi tau) exp(-tau w^2)
std::vector<double> deconvolution(const GridPlan& p, std::size_t K) {
  std::vector<double> d(K + 1);
  const double scale = p.h / std::sqrt(4.0 * std::numbers::pi * p.tau);
  for (std::size_t k = 0; k <= K; ++k) {
    const double w = std::numbers::pi * static_cast<double>(k);
    d[k] = std::exp(p.tau * w * w) * scale;
  }
  return d;
}

}  // namespace

std::vector<double> cosine_sums_gridded(std::span<const double> x, std::span<const double> v, std::size_t K,
                                        const MomentOptions& options) {
  if (x.size() != v.size()) throw InvalidArgument("cosine_sums_gridded: length mismatch");
  const GridPlan p = plan_grid(K, options);
  std::vector<double> f(p.cells + 1, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double half = 0.5 * v[j];
    spread_images(x[j], p, [&](std::size_t n, double w) { f[n] += half * w; });
  }
  std::vector<double> y = dct::dct1_transpose_apply(f);
  const double unnorm = std::sqrt(2.0 * static_cast<double>(p.cells));
  const std::vector<double> d = deconvolution(p, K);
  std::vector<double> g(K + 1);
  for (std::size_t k = 0; k <= K; ++k) g[k] = unnorm * y[k] * d[k];
  return g;
}

Array2D cosine_sums_2d_gridded(std::span<const double> x, std::span<const double> y, std::span<const double> v,
                               std::size_t Kx, std::size_t Ky, const MomentOptions& options) {
  if (x.size() != v.size() || y.size() != v.size()) throw InvalidArgument("cosine_sums_2d_gridded: length mismatch");
  const GridPlan px = plan_grid(Kx, options);
  const GridPlan py = plan_grid(Ky, options);
  Array2D f(py.cells + 1, px.cells + 1);
  std::vector<std::pair<std::size_t, double>> wx;
  std::vector<std::pair<std::size_t, double>> wy;
  for (std::size_t j = 0; j < v.size(); ++j) {
    wx.clear();
    wy.clear();
    spread_images(x[j], px, [&](std::size_t n, double w) { wx.emplace_back(n, w); });
    spread_images(y[j], py, [&](std::size_t n, double w) { wy.emplace_back(n, w); });
    const double quarter = 0.25 * v[j];
    for (const auto& [ny, w2] : wy) {
      for (const auto& [nx, w1] : wx) f(ny, nx) += quarter * w1 * w2;
    }
  }
  const Array2D t = dct::dct2d_transpose_apply(f);
  const double unnorm = std::sqrt(2.0 * static_cast<double>(px.cells)) * std::sqrt(2.0 * static_cast<double>(py.cells));
  const std::vector<double> dx = deconvolution(px, Kx);
  const std::vector<double> dy = deconvolution(py, Ky);
  Array2D g(Ky + 1, Kx + 1);
  for (std::size_t l = 0; l <= Ky; ++l) {
    for (std::size_t k = 0; k <= Kx; ++k) g(l, k) = unnorm * t(l, k) * dx[k] * dy[l];
  }
  return g;
}

}  // namespace cosfit
