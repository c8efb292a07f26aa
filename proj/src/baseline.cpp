#include "cosfit/baseline.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "cosfit/error.hpp"

namespace cosfit {
namespace {

void check_count(std::size_t n) {
  if (n == 0 || n % 2 == 0) throw InvalidArgument("periodic baseline: coefficient count must be odd, got " + std::to_string(n));
}

// Values of the n basis functions at t.
void basis(double t, std::size_t n, double* out) {
  out[0] = 1.0;
  for (std::size_t k = 1; 2 * k < n + 1; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
    out[2 * k - 1] = std::cos(a);
    out[2 * k] = std::sin(a);
  }
}

struct LsResult {
  std::vector<double> x;
  std::size_t rank;
};

LsResult weighted_ls(Eigen::MatrixXd& V, std::span<const double> s, std::span<const double> w) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double sw = std::sqrt(w[j]);
    V.row(static_cast<Eigen::Index>(j)) *= sw;
    b(static_cast<Eigen::Index>(j)) = sw * s[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  const Eigen::VectorXd c = qr.solve(b);
  return {std::vector<double>(c.data(), c.data() + c.size()), static_cast<std::size_t>(qr.rank())};
}

}  // namespace

std::size_t default_periodic_count(std::size_t degree) { return (degree + 1) % 2 == 1 ? degree + 1 : degree + 2; }

PeriodicFit1D periodic_fit(const SampleSet1D& samples, std::size_t n) {
  check_count(n);
  const std::size_t r = samples.size();
  if (n > r) throw InvalidArgument("periodic baseline: " + std::to_string(n) + " coefficients exceed " + std::to_string(r) + " samples");
  Eigen::MatrixXd V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
  std::vector<double> row(n);
  for (std::size_t j = 0; j < r; ++j) {
    basis(samples.points[j], n, row.data());
    for (std::size_t i = 0; i < n; ++i) V(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = row[i];
  }
  auto ls = weighted_ls(V, samples.values, samples.weights);
  PeriodicFit1D f;
  f.n = n;
  f.coeffs = std::move(ls.x);
  f.rank = ls.rank;
  f.rank_deficient = ls.rank < n;
  return f;
}

PeriodicFit2D periodic_fit(const SampleSet2D& samples, std::size_t nx, std::size_t ny) {
  check_count(nx);
  check_count(ny);
  const std::size_t r = samples.size();
  const std::size_t n = nx * ny;
  if (n > r) throw InvalidArgument("periodic baseline: " + std::to_string(n) + " coefficients exceed " + std::to_string(r) + " samples");
  Eigen::MatrixXd V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
  std::vector<double> bx(nx), by(ny);
  for (std::size_t j = 0; j < r; ++j) {
    basis(samples.points.x()[j], nx, bx.data());
    basis(samples.points.y()[j], ny, by.data());
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t ix = 0; ix < nx; ++ix) {
        V(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(iy * nx + ix)) = bx[ix] * by[iy];
      }
    }
  }
  auto ls = weighted_ls(V, samples.values, samples.weights);
  PeriodicFit2D f;
  f.nx = nx;
  f.ny = ny;
  f.coeffs = std::move(ls.x);
  f.rank = ls.rank;
  f.rank_deficient = ls.rank < n;
  return f;
}

std::vector<double> PeriodicFit1D::evaluate(std::span<const double> t) const {
  std::vector<double> out(t.size()), b(n);
  for (std::size_t j = 0; j < t.size(); ++j) {
    basis(t[j], n, b.data());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += coeffs[i] * b[i];
    out[j] = s;
  }
  return out;
}

std::vector<double> PeriodicFit2D::evaluate(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw InvalidArgument("PeriodicFit2D::evaluate: x/y length mismatch");
  std::vector<double> out(x.size()), bx(nx), by(ny);
  for (std::size_t j = 0; j < x.size(); ++j) {
    basis(x[j], nx, bx.data());
    basis(y[j], ny, by.data());
    double s = 0.0;
    for (std::size_t iy = 0; iy < ny; ++iy) {
      double inner = 0.0;
      for (std::size_t ix = 0; ix < nx; ++ix) inner += coeffs[iy * nx + ix] * bx[ix];
      s += inner * by[iy];
    }
    out[j] = s;
  }
  return out;
}

io::GridField evaluate_on_grid(const PeriodicFit1D& fit, std::size_t L, const io::AxisMap& x_map) {
  if (L < 1) throw InvalidArgument("grid resolution L must be at least 1");
  io::GridField g;
  g.dim = 1;
  g.nx = L + 1;
  std::vector<double> t(g.nx);
  g.x.resize(g.nx);
  for (std::size_t l = 0; l <= L; ++l) {
    t[l] = static_cast<double>(l) / static_cast<double>(L);
    g.x[l] = x_map.from_unit(t[l]);
  }
  g.values = fit.evaluate(t);
  g.provenance = io::Provenance::fit;
  return g;
}

io::GridField evaluate_on_grid(const PeriodicFit2D& fit, std::size_t Lx, std::size_t Ly, const io::AxisMap& x_map,
                               const io::AxisMap& y_map) {
  if (Lx < 1 || Ly < 1) throw InvalidArgument("grid resolution L must be at least 1");
  io::GridField g;
  g.dim = 2;
  g.nx = Lx + 1;
  g.ny = Ly + 1;
  std::vector<double> tx(g.nx * g.ny), ty(g.nx * g.ny);
  g.x.resize(tx.size());
  g.y.resize(ty.size());
  for (std::size_t i = 0; i < g.ny; ++i) {
    for (std::size_t k = 0; k < g.nx; ++k) {
      const std::size_t idx = i * g.nx + k;
      tx[idx] = static_cast<double>(k) / static_cast<double>(Lx);
      ty[idx] = static_cast<double>(i) / static_cast<double>(Ly);
      g.x[idx] = x_map.from_unit(tx[idx]);
      g.y[idx] = y_map.from_unit(ty[idx]);
    }
  }
  g.values = fit.evaluate(tx, ty);
  g.provenance = io::Provenance::fit;
  return g;
}

}  // namespace cosfit
