#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cosfit/error.hpp"
#include "cosfit/nudct.hpp"
#include "oracles.hpp"

using namespace cosfit;

TEST_CASE("point sets validate") {
  CHECK_THROWS_AS(PointSet1D({}), InvalidArgument);
  CHECK_THROWS_AS(PointSet1D({0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(PointSet1D({0.6, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(PointSet1D({-0.1, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(PointSet2D({0.1, 0.1}, {0.2, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(PointSet2D({0.1}, {1.2}), InvalidArgument);
  CHECK_THROWS_AS(PointSet2D({0.1, 0.2}, {0.2}), InvalidArgument);
  CHECK_NOTHROW(PointSet2D({0.1, 0.1}, {0.2, 0.3}));
}

TEST_CASE("cosine_sums hand cases") {
  const PointSet1D pts({0.0, 1.0});
  const auto g = cosine_sums(pts, std::vector<double>{1.0, 1.0}, 2);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(std::abs(g[1]) < 1e-15);
  CHECK(g[2] == doctest::Approx(2.0));

  const PointSet1D p2({0.1, 0.4, 0.9});
  const auto g0 = cosine_sums(p2, std::vector<double>{1.0, -2.0, 4.0}, 0);
  REQUIRE(g0.size() == 1);
  CHECK(g0[0] == doctest::Approx(3.0));

  CHECK_THROWS_AS(cosine_sums(p2, std::vector<double>{1.0}, 3), InvalidArgument);
  CHECK_THROWS_AS(cosine_sums(p2, std::vector<double>{1.0, NAN, 0.0}, 3), InvalidArgument);
}

TEST_CASE("cosine_sums against compensated oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_points(rng, 50);
    const auto v = oracle::random_vector(rng, 50);
    const auto g = cosine_sums(PointSet1D(x), v, 30);
    const auto ref = oracle::cosine_sums(x, v, 30);
    CHECK(oracle::rel_diff(g, ref) <= 1e-13);
  }
}

TEST_CASE("cosine_sums_range extends a prefix") {
  std::mt19937_64 rng(22);
  const auto x = oracle::random_points(rng, 40);
  const auto v = oracle::random_vector(rng, 40);
  const auto full = cosine_sums(PointSet1D(x), v, 60);
  const auto tail = cosine_sums_range(x, v, 25, 61);
  REQUIRE(tail.size() == 36);
  for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == doctest::Approx(full[25 + i]).epsilon(1e-13));
}

TEST_CASE("cosine_sums linearity") {
  std::mt19937_64 rng(23);
  const auto x = oracle::random_points(rng, 64);
  const auto u = oracle::random_vector(rng, 64);
  const auto v = oracle::random_vector(rng, 64);
  std::vector<double> w(64);
  for (int j = 0; j < 64; ++j) w[j] = 2.5 * u[j] - 0.75 * v[j];
  const PointSet1D pts(x);
  const auto gu = cosine_sums(pts, u, 40), gv = cosine_sums(pts, v, 40), gw = cosine_sums(pts, w, 40);
  for (int k = 0; k <= 40; ++k) CHECK(std::abs(gw[k] - (2.5 * gu[k] - 0.75 * gv[k])) <= 1e-12);
}

TEST_CASE("cosine_sums_2d") {
  const PointSet2D origin({0.0}, {0.0});
  const Array2D ones = cosine_sums_2d(origin, std::vector<double>{1.0}, 1, 1);
  for (double e : ones.values()) CHECK(e == doctest::Approx(1.0));

  std::mt19937_64 rng(24);
  auto x = oracle::random_vector(rng, 40, 0.0, 1.0);
  auto y = oracle::random_vector(rng, 40, 0.0, 1.0);
  const PointSet2D pts(x, y);
  const Array2D zero = cosine_sums_2d(pts, std::vector<double>(40, 0.0), 8, 8);
  for (double e : zero.values()) CHECK(e == 0.0);

  const auto v = oracle::random_vector(rng, 40);
  const Array2D G = cosine_sums_2d(pts, v, 8, 6);
  REQUIRE(G.rows() == 7);
  REQUIRE(G.cols() == 9);
  double worst = 0.0, scale = 0.0;
  for (int l = 0; l <= 6; ++l)
    for (int k = 0; k <= 8; ++k) {
      oracle::Sum s;
      for (int j = 0; j < 40; ++j) s.add(v[j] * oracle::cospi(k, x[j]) * oracle::cospi(l, y[j]));
      worst = std::max(worst, std::abs(G(l, k) - s.value()));
      scale = std::max(scale, std::abs(s.value()));
    }
  CHECK(worst <= 1e-13 * scale);
}

TEST_CASE("gridded moments meet their tolerance") {
  std::mt19937_64 rng(25);
  for (double tol : {1e-4, 1e-7, 1e-10}) {
    MomentOptions opt;
    opt.method = MomentMethod::gridded;
    opt.tolerance = tol;
    const auto x = oracle::random_points(rng, 300);
    const auto v = oracle::random_vector(rng, 300);
    double scale = 0.0;
    for (double e : v) scale += std::abs(e);
    const auto g = cosine_sums(PointSet1D(x), v, 80, opt);
    const auto ref = oracle::cosine_sums(x, v, 80);
    double err = 0.0;
    for (int k = 0; k <= 80; ++k) err = std::max(err, std::abs(g[k] - ref[k]));
    CAPTURE(tol);
    CHECK(err <= tol * scale);

    auto y = oracle::random_vector(rng, 300, 0.0, 1.0);
    const Array2D G = cosine_sums_2d(PointSet2D(x, y), v, 20, 15, opt);
    const Array2D Gref = cosine_sums_2d(PointSet2D(x, y), v, 20, 15);
    double err2 = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) err2 = std::max(err2, std::abs(G.values()[i] - Gref.values()[i]));
    CHECK(err2 <= tol * scale);
  }
}

TEST_CASE("eval_poly basics") {
  const CosinePoly1D one({std::numbers::sqrt2, 0.0, 0.0});
  const auto e = eval_poly(one, std::vector<double>{0.0, 0.3, 0.77, 1.0});
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  CHECK(e.out_of_range == 0);

  const CosinePoly1D c1({0.0, 1.0});
  const auto p = eval_poly(c1, std::vector<double>{0.0, 0.5, 1.0, 1.5});
  CHECK(p.values[0] == doctest::Approx(1.0));
  CHECK(std::abs(p.values[1]) < 1e-15);
  CHECK(p.values[2] == doctest::Approx(-1.0));
  CHECK(p.out_of_range == 1);

  CHECK_THROWS_AS(CosinePoly1D({1.0, INFINITY}), InvalidArgument);
  CHECK_THROWS_AS(CosinePoly1D(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("uniform grid evaluation equals direct summation") {
  std::mt19937_64 rng(26);
  for (std::size_t M : {0, 1, 16, 100, 200}) {
    const CosinePoly1D poly(oracle::random_vector(rng, M + 1));
    for (std::size_t L : {1, 2, 64, 150}) {
      const auto fast = eval_poly_grid(poly, L);
      REQUIRE(fast.size() == L + 1);
      std::vector<double> direct(L + 1);
      for (std::size_t l = 0; l <= L; ++l) {
        oracle::Sum s;
        const double t = static_cast<double>(l) / static_cast<double>(L);
        for (std::size_t k = 0; k <= M; ++k)
          s.add(poly[k] * oracle::cospi(static_cast<double>(k), t) * (k == 0 ? oracle::kInvSqrt2 : 1.0));
        direct[l] = s.value();
      }
      CAPTURE(M);
      CAPTURE(L);
      CHECK(oracle::rel_diff(fast, direct) <= 1e-12);
      // eval_poly on the same grid is routed to the same path.
      std::vector<double> t(L + 1);
      for (std::size_t l = 0; l <= L; ++l) t[l] = static_cast<double>(l) / static_cast<double>(L);
      CHECK(oracle::rel_diff(eval_poly(poly, t).values, direct) <= 1e-12);
    }
  }
}

TEST_CASE("even extension symmetry") {
  std::mt19937_64 rng(27);
  const CosinePoly1D poly(oracle::random_vector(rng, 12));
  const auto t = oracle::random_vector(rng, 30, 0.0, 1.0);
  std::vector<double> neg(t.size()), refl(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    neg[i] = -t[i];
    refl[i] = 2.0 - t[i];
  }
  const auto p = eval_poly(poly, t).values;
  CHECK(oracle::rel_diff(eval_poly(poly, neg).values, p) <= 1e-12);
  CHECK(oracle::rel_diff(eval_poly(poly, refl).values, p) <= 1e-12);
}

TEST_CASE("eval_poly_2d") {
  CosinePoly2D one(2, 3);
  one(0, 0) = std::numbers::sqrt2;
  const auto e = eval_poly_2d(one, std::vector<double>{0.1, 0.9}, std::vector<double>{0.4, 0.0});
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));

  CosinePoly2D c10(1, 0);
  c10(1, 0) = 1.0;
  const auto p = eval_poly_2d(c10, std::vector<double>{0.5, 0.5, 0.0}, std::vector<double>{0.1, 0.8, 0.3});
  CHECK(std::abs(p.values[0]) < 1e-15);
  CHECK(std::abs(p.values[1]) < 1e-15);
  CHECK(p.values[2] == doctest::Approx(1.0));

  std::mt19937_64 rng(28);
  const CosinePoly2D poly(6, 6, oracle::random_vector(rng, 49));
  const Array2D grid = eval_poly_2d_grid(poly, 32, 32);
  REQUIRE(grid.rows() == 33);
  REQUIRE(grid.cols() == 33);
  std::vector<double> xs, ys, direct;
  for (int i = 0; i <= 32; ++i)
    for (int k = 0; k <= 32; ++k) {
      const double x = k / 32.0, y = i / 32.0;
      xs.push_back(x);
      ys.push_back(y);
      oracle::Sum s;
      for (int l = 0; l <= 6; ++l)
        for (int kk = 0; kk <= 6; ++kk)
          s.add(poly(kk, l) * oracle::cospi(kk, x) * oracle::cospi(l, y) *
                ((kk == 0 && l == 0) ? oracle::kInvSqrt2 : 1.0));
      direct.push_back(s.value());
    }
  CHECK(oracle::rel_diff(grid.values(), direct) <= 1e-12);
  CHECK(oracle::rel_diff(eval_poly_2d(poly, xs, ys).values, direct) <= 1e-12);

  // Rectangular grid with high degree folding.
  const CosinePoly2D big(40, 3, oracle::random_vector(rng, 41 * 4));
  const Array2D g2 = eval_poly_2d_grid(big, 10, 7);
  std::vector<double> gx, gy;
  for (int i = 0; i <= 7; ++i)
    for (int k = 0; k <= 10; ++k) {
      gx.push_back(k / 10.0);
      gy.push_back(i / 7.0);
    }
  CHECK(oracle::rel_diff(g2.values(), eval_poly_2d(big, gx, gy).values) <= 1e-12);
}
