#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "jellium/error.hpp"
#include "jellium/geometry.hpp"
#include "jellium/quadrature.hpp"
#include "oracles.hpp"

using namespace jellium;
using namespace jellium::geom;
using doctest::Approx;

namespace {

Polygon unit_square_at(double x0, double y0) {
  return Polygon{{{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}}};
}

Polygon regular_hexagon(double R) {
  Polygon p;
  for (int i = 0; i < 6; ++i) {
    const double t = std::numbers::pi / 3.0 * i + std::numbers::pi / 6.0;
    p.vertices.emplace_back(R * std::cos(t), R * std::sin(t));
  }
  return p;
}

std::vector<std::pair<double, double>> raw(const Polygon& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& v : p.vertices) out.emplace_back(v.x(), v.y());
  return out;
}

}  // namespace

TEST_CASE("quadrature rules") {
  const auto& rule = quad::gauss_legendre(16);
  double w = 0.0;
  for (double x : rule.weights) w += x;
  CHECK(w == Approx(2.0).epsilon(1e-15));
  CHECK(quad::gauss([](double x) { return std::pow(x, 31); }, 0.0, 1.0, 16) == Approx(1.0 / 32.0).epsilon(1e-14));
  CHECK(quad::gauss([](double x) { return std::exp(x); }, -1.0, 2.0, 16) ==
        Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-14));
  const double h = 1e-4;
  const double g = quad::graded([&](double t) { return 1.0 / (h * h + t * t); }, 0.0, 10.0, h);
  CHECK(g == Approx(std::atan(10.0 / h) / h).epsilon(1e-12));
  const double ts = quad::tanh_sinh([](double x, double) { return std::log(x); }, 0.0, 1.0);
  CHECK(ts == Approx(-1.0).epsilon(1e-12));
  const double ts2 = quad::tanh_sinh([](double x, double gap) { return 1.0 / std::sqrt(gap * (2.0 - gap)) + 0.0 * x; }, -1.0, 1.0);
  CHECK(ts2 == Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("polygon basics") {
  const Polygon sq = unit_square_at(-0.5, -0.5);
  CHECK(sq.area() == Approx(1.0));
  CHECK(sq.centroid().norm() < 1e-15);
  const Eigen::Matrix2d m = sq.second_moment();
  CHECK(m(0, 0) == Approx(1.0 / 12.0));
  CHECK(m(1, 1) == Approx(1.0 / 12.0));
  CHECK(std::abs(m(0, 1)) < 1e-15);
  const Polygon shifted = unit_square_at(0.0, 0.0);
  CHECK(shifted.second_moment()(0, 1) == Approx(0.25));
  CHECK(shifted.contains({0.5, 0.5}));
  CHECK_FALSE(shifted.contains({1.5, 0.5}));
  const Polygon hex = regular_hexagon(1.0);
  CHECK(hex.area() == Approx(1.5 * std::sqrt(3.0)));
}

TEST_CASE("union boundary cancels shared edges") {
  std::vector<Polygon> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) grid.push_back(unit_square_at(i, j));
  const auto b = union_boundary(grid);
  CHECK(b.size() == 10);
  double perimeter = 0.0;
  for (const auto& e : b) perimeter += e.length();
  CHECK(perimeter == Approx(10.0));
}

TEST_CASE("second antiderivative of phi") {
  for (auto k : {RadialKernel::power(0.5), RadialKernel::power(1.3), RadialKernel::neg_log()}) {
    for (double u : {0.3, 1.0, 2.7}) {
      const double h = 1e-3;
      const double fd = (k.phi_antideriv2(u + h) - 2.0 * k.phi_antideriv2(u) + k.phi_antideriv2(u - h)) / (h * h);
      CHECK(fd == Approx(k.phi(u)).epsilon(1e-6));
      CHECK(k.phi_antideriv2(-u) == k.phi_antideriv2(u));
    }
    // radial Laplacian of phi reproduces V
    for (double r : {0.4, 1.7}) {
      const double h = 1e-3;
      const double d2 = (k.phi(r + h) - 2.0 * k.phi(r) + k.phi(r - h)) / (h * h);
      const double d1 = (k.phi(r + h) - k.phi(r - h)) / (2.0 * h);
      CHECK(d2 + d1 / r == Approx(k.value(r)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(RadialKernel::power(2.0), RangeError);
}

TEST_CASE("single integrals against polar quadrature") {
  const Polygon hex = regular_hexagon(0.7);
  const Polygon sq = unit_square_at(-0.5, -0.5);
  const std::vector<Vec2> points = {{0.0, 0.0}, {0.1, -0.2}, {0.5, 0.0}, {1.3, 0.4}, {4.0, -3.0}};
  for (const Polygon* P : {&hex, &sq}) {
    const auto edges = P->edges();
    for (double s : {0.0, 0.5, 1.0, 1.5}) {
      const auto k = RadialKernel::power(s);
      for (const auto& x : points) {
        const double ref = oracle::polygon_potential(raw(*P), x.x(), x.y(), [&](double r) { return std::pow(r, -s); });
        CHECK(region_potential(edges, x, k) == Approx(ref).epsilon(1e-9));
      }
    }
    const auto lk = RadialKernel::neg_log();
    for (const auto& x : points) {
      const double ref = oracle::polygon_potential(raw(*P), x.x(), x.y(), [](double r) { return -std::log(r); });
      CHECK(region_potential(edges, x, lk) == Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("single integral is translation covariant") {
  const Polygon hex = regular_hexagon(0.6);
  const Vec2 t(3.2, -1.7), x(0.2, 0.1);
  const auto k = RadialKernel::neg_log();
  CHECK(region_potential(hex.translated(t).edges(), x + t, k) ==
        Approx(region_potential(hex.edges(), x, k)).epsilon(1e-13));
}

TEST_CASE("pair integrals of unit squares against autocorrelation quadrature") {
  const std::vector<Vec2> offsets = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0.5, 1}, {-3, 4}};
  for (double s : {0.5, 1.0, 1.5}) {
    const auto k = RadialKernel::power(s);
    for (const auto& o : offsets) {
      const double ref = oracle::square_pair(o.x(), o.y(), [&](double r) { return std::pow(r, -s); });
      const double got = region_pair_integral(unit_square_at(0, 0).edges(), unit_square_at(o.x(), o.y()).edges(), k);
      CHECK(got == Approx(ref).epsilon(1e-8));
    }
  }
  const auto lk = RadialKernel::neg_log();
  for (const auto& o : offsets) {
    const double ref = oracle::square_pair(o.x(), o.y(), [](double r) { return -std::log(r); });
    const double got = region_pair_integral(unit_square_at(0, 0).edges(), unit_square_at(o.x(), o.y()).edges(), lk);
    CHECK(got == Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("pair integrals: scaling and additivity") {
  const Polygon hex = regular_hexagon(0.62);
  const double lambda = 1.7;
  Polygon big = hex;
  for (auto& v : big.vertices) v *= lambda;
  const double A = hex.area();
  for (double s : {0.3, 1.2}) {
    const auto k = RadialKernel::power(s);
    CHECK(region_pair_integral(big.edges(), big.edges(), k) ==
          Approx(std::pow(lambda, 4.0 - s) * region_pair_integral(hex.edges(), hex.edges(), k)).epsilon(1e-11));
  }
  const auto lk = RadialKernel::neg_log();
  const double base = region_pair_integral(hex.edges(), hex.edges(), lk);
  CHECK(region_pair_integral(big.edges(), big.edges(), lk) ==
        Approx(std::pow(lambda, 4.0) * (base - std::log(lambda) * A * A)).epsilon(1e-11));

  // A against (B1 u B2) equals the sum of the pieces
  const Polygon a = unit_square_at(0, 0);
  const Polygon b1 = unit_square_at(1, 0), b2 = unit_square_at(1, 1);
  const auto both = union_boundary({b1, b2});
  for (auto k : {RadialKernel::power(0.8), lk}) {
    const double whole = region_pair_integral(a.edges(), both, k);
    const double parts = region_pair_integral(a.edges(), b1.edges(), k) + region_pair_integral(a.edges(), b2.edges(), k);
    CHECK(whole == Approx(parts).epsilon(1e-12));
  }
}
