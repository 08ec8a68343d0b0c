#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "jellium/error.hpp"
#include "jellium/jellium_finite.hpp"
#include "oracles.hpp"

using namespace jellium;
using doctest::Approx;
using Eigen::Vector2d;

namespace {

constexpr double kPi = std::numbers::pi;

geom::Polygon square(double cx, double cy, double side) {
  const double h = side / 2;
  return geom::Polygon{{{cx - h, cy - h}, {cx + h, cy - h}, {cx + h, cy + h}, {cx - h, cy + h}}};
}

geom::Polygon regular_ngon(int n, double R) {
  geom::Polygon p;
  for (int i = 0; i < n; ++i) p.vertices.emplace_back(R * std::cos(2 * kPi * i / n), R * std::sin(2 * kPi * i / n));
  return p;
}

std::vector<std::pair<double, double>> pairs_of(const geom::Polygon& p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& v : p.vertices) out.emplace_back(v.x(), v.y());
  return out;
}

// Potential of a uniform unit-density disk, written out from Gauss's law.
double disk_potential_oracle(double a, double r) {
  if (r >= a) return -kPi * a * a * std::log(r);
  return -kPi * a * a * std::log(a) + kPi * (a * a - r * r) / 2.0;
}

PolygonalDomain single(const geom::Polygon& p) { return PolygonalDomain{{p}, {}}; }

}  // namespace

TEST_CASE("background_potential of a disk centered at x") {
  for (double a : {0.3, 1.0, 2.5}) {
    PolygonalDomain d{{}, {{Vector2d(1.0, -2.0), a}}};
    CHECK(background_potential(d, Vector2d(1.0, -2.0)) == Approx(kPi * a * a * (std::log(a) - 0.5)).epsilon(1e-13));
  }
}

TEST_CASE("polygonal disk approximation converges to the exact disk") {
  const double a = 0.8;
  const double exact = kPi * a * a * (std::log(a) - 0.5);
  double prev = 1.0;
  for (int n : {64, 256, 1024}) {
    // equal-area n-gon
    const double R = a * std::sqrt(2 * kPi / (n * std::sin(2 * kPi / n)));
    const double err = std::abs(background_potential(single(regular_ngon(n, R)), Vector2d::Zero()) - exact);
    CHECK(err < prev / 10.0);
    prev = err;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("background_potential of a unit square matches the quadrature oracle") {
  const auto Q = square(0.2, -0.1, 1.0);
  auto V = [](double r) { return std::log(r); };
  for (auto x : {Vector2d(0.2, -0.1), Vector2d(0.45, 0.3), Vector2d(1.7, 0.9), Vector2d(0.7, -0.6)}) {
    const double oracle = oracle::polygon_potential(pairs_of(Q), x.x(), x.y(), V, 1e-11);
    CHECK(background_potential(single(Q), x) == Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("background_potential translation covariance") {
  const PolygonalDomain H = hex_patch(1);
  const Vector2d t(3.3, -1.7), x(0.4, 0.9);
  CHECK(background_potential(H.translated(t), x + t) == Approx(background_potential(H, x)).epsilon(1e-12));
}

TEST_CASE("background_self of a disk: mean -log distance is 1/4 - log a") {
  for (double a : {0.5, 1.0, 3.0}) {
    PolygonalDomain d{{}, {{Vector2d(0.3, 0.1), a}}};
    const double A = kPi * a * a;
    // background_self = (1/2) int int log = -(1/2) A^2 (1/4 - log a)
    CHECK(background_self(d) / (0.5 * A * A) == Approx(std::log(a) - 0.25).epsilon(1e-12));
  }
}

TEST_CASE("background_self of a unit square: Monte Carlo oracle") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 10'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = 0.5 * std::log(std::pow(u(rng) - u(rng), 2) + std::pow(u(rng) - u(rng), 2));
    sum += l;
    sum2 += l * l;
  }
  const double mean = sum / n;
  const double sigma = std::sqrt((sum2 / n - mean * mean) / n);
  const double value = 2.0 * background_self(single(square(0.5, 0.5, 1.0)));  // mean log distance
  CHECK(std::abs(value - mean) < 3.0 * sigma);
  // deterministic autocorrelation oracle
  const double oracle = oracle::square_pair(0.0, 0.0, [](double r) { return std::log(r); });
  CHECK(value == Approx(oracle).epsilon(1e-9));
}

TEST_CASE("background_self scaling: mean log distance shifts by log lambda") {
  const PolygonalDomain H = hex_patch(1);
  const double A = H.total_area();
  const double m1 = 2.0 * background_self(H) / (A * A);
  for (double lam : {0.5, 2.0, 7.0}) {
    PolygonalDomain S;
    for (const auto& p : H.polygons) {
      geom::Polygon q = p;
      for (auto& v : q.vertices) v *= lam;
      S.polygons.push_back(q);
    }
    const double As = S.total_area();
    CHECK(2.0 * background_self(S) / (As * As) == Approx(m1 + std::log(lam)).epsilon(1e-10));
  }
}

TEST_CASE("jellium_energy: one particle at the center of a disk") {
  const double a = 1.0 / std::sqrt(kPi);
  PolygonalDomain d{{}, {{Vector2d(0.5, 0.5), a}}};
  const auto r = jellium_energy(d, {Vector2d(0.5, 0.5)});
  const double expected = kPi * a * a * (std::log(a) - 0.5) - 0.5 * std::pow(kPi * a * a, 2) * (std::log(a) - 0.25);
  CHECK(r.total == Approx(expected).epsilon(1e-13));
  CHECK(r.total == Approx(-(0.375 + 0.25 * std::log(kPi))).epsilon(1e-13));
  CHECK(r.pairwise == 0.0);
  CHECK(r.metadata["neutral"].get<bool>());
}

TEST_CASE("jellium_energy: one particle in a unit square against oracles") {
  const auto Q = square(0.0, 0.0, 1.0);
  const Vector2d x(0.1, -0.2);
  auto V = [](double r) { return std::log(r); };
  const double bg = oracle::polygon_potential(pairs_of(Q), x.x(), x.y(), V, 1e-11);
  const double self = -0.5 * oracle::square_pair(0.0, 0.0, V);
  const auto r = jellium_energy(single(Q), {x});
  CHECK(r.background == Approx(bg).epsilon(1e-9));
  CHECK(r.self_term == Approx(self).epsilon(1e-9));
  CHECK(r.total == Approx(bg + self).epsilon(1e-9));
}

TEST_CASE("jellium_energy: hexagonal patches") {
  const double e_tri = std::log(48 * kPi / std::pow(std::tgamma(1.0 / 6.0), 6)) / 8.0;
  CHECK(e_tri == Approx(-0.66056).epsilon(1e-5));
  const auto p3 = hex_patch_points(3), p6 = hex_patch_points(6);
  REQUIRE(p3.size() == 37);
  REQUIRE(p6.size() == 127);
  CHECK(hex_patch(3).total_area() == Approx(37.0).epsilon(1e-12));
  const double e3 = jellium_energy(hex_patch(3), p3).total / 37.0;
  const double e6 = jellium_energy(hex_patch(6), p6).total / 127.0;
  CHECK(std::abs(e3 + 0.6606) < 0.05);
  CHECK(std::abs(e6 - e_tri) < std::abs(e3 - e_tri));
  CHECK(e3 >= lieb_narnhofer_optimal().bound);
  CHECK(e6 >= lieb_narnhofer_optimal().bound);
}

TEST_CASE("jellium_energy: rigid motions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const PolygonalDomain H = hex_patch(1);
  std::vector<Vector2d> pts;
  for (int i = 0; i < 7; ++i) pts.emplace_back(u(rng), u(rng));
  const double e0 = jellium_energy(H, pts).total;
  const double angle = 0.7;
  const Vector2d t(2.0, -5.0);
  const Eigen::Matrix2d R = Eigen::Rotation2Dd(angle).toRotationMatrix();
  std::vector<Vector2d> moved;
  for (const auto& p : pts) moved.push_back(R * p + t);
  CHECK(jellium_energy(H.rotated(angle).translated(t), moved).total == Approx(e0).epsilon(1e-9));
}

TEST_CASE("jellium_energy errors and warnings") {
  const PolygonalDomain H = hex_patch(1);
  CHECK_THROWS_AS(jellium_energy(H, {Vector2d(0, 0), Vector2d(0, 0)}), SingularityError);
  const auto r = jellium_energy(H, {Vector2d(0, 0)});
  CHECK_FALSE(r.metadata["neutral"].get<bool>());
  CHECK(r.metadata.contains("warning"));
  PolygonalDomain bad{{geom::Polygon{{{0, 0}, {0, 1}, {1, 0}}}}, {}};  // clockwise
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(hex_patch(-1), DomainError);
}

TEST_CASE("d_interaction: point-like disks and Newton's theorem") {
  ChargeSystem f{{{Vector2d(0, 0), 1e-3, 1.0}}, {}};
  ChargeSystem g{{{Vector2d(2, 0), 1e-3, 1.0}}, {}};
  CHECK(d_interaction(f, g) == Approx(-0.5 * std::log(2.0)).epsilon(1e-13));
  // a disk inside a square region: replacing the disk by a smaller
  // concentric one keeps the interaction with a distant square unchanged
  ChargeSystem sq{{}, {{single(square(3.0, 1.0, 1.0)), 1.0}}};
  ChargeSystem big{{{Vector2d(0, 0), 0.9, 1.0}}, {}}, tiny{{{Vector2d(0, 0), 0.01, 1.0}}, {}};
  CHECK(d_interaction(big, sq) == Approx(d_interaction(tiny, sq)).epsilon(1e-9));
}

TEST_CASE("d_interaction: overlapping disks against a polar oracle") {
  // integral over disk 2 of the potential of disk 1 (unit densities)
  const double a1 = 0.7, a2 = 0.5;
  const Vector2d c1(0, 0), c2(0.4, 0.3);
  const double oracle = oracle::adaptive_simpson(
      [&](double t) {
        return oracle::adaptive_simpson(
            [&](double r) {
              const Vector2d y = c2 + r * Vector2d(std::cos(t), std::sin(t));
              return disk_potential_oracle(a1, (y - c1).norm()) * r;
            },
            0.0, a2, 1e-12, 40);
      },
      0.0, 2 * kPi, 1e-11, 30);
  ChargeSystem f{{{c1, a1, kPi * a1 * a1}}, {}}, g{{{c2, a2, kPi * a2 * a2}}, {}};
  CHECK(2.0 * d_interaction(f, g) == Approx(oracle).epsilon(1e-8));
  CHECK(d_interaction(f, g) == Approx(d_interaction(g, f)).epsilon(1e-10));
}

TEST_CASE("d_interaction: disk against a polygon, polar oracle") {
  const double a = 0.6;
  const Vector2d c(0.3, 0.2);
  const auto Q = square(0.0, 0.0, 1.0);
  const double oracle = oracle::polygon_potential(
      pairs_of(Q), c.x(), c.y(), [&](double r) { return disk_potential_oracle(a, r); }, 1e-11);
  ChargeSystem f{{{c, a, kPi * a * a}}, {}}, g{{}, {{single(Q), 1.0}}};
  CHECK(2.0 * d_interaction(f, g) == Approx(oracle).epsilon(1e-8));
}

TEST_CASE("d_interaction: symmetry and bilinearity") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ur(0.1, 0.6);
  auto random_system = [&] {
    ChargeSystem s;
    for (int i = 0; i < 3; ++i) s.disks.push_back({Vector2d(u(rng), u(rng)), ur(rng), u(rng)});
    s.regions.push_back({single(square(u(rng), u(rng), 0.5 + ur(rng))), u(rng)});
    return s;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const ChargeSystem f = random_system(), g = random_system(), h = random_system();
    CHECK(d_interaction(f, g) == Approx(d_interaction(g, f)).epsilon(1e-9));
    ChargeSystem gh = g;
    gh.disks.insert(gh.disks.end(), h.disks.begin(), h.disks.end());
    gh.regions.insert(gh.regions.end(), h.regions.begin(), h.regions.end());
    CHECK(d_interaction(f, gh) == Approx(d_interaction(f, g) + d_interaction(f, h)).epsilon(1e-9));
    ChargeSystem f2 = f;
    for (auto& d : f2.disks) d.charge *= 2.5;
    for (auto& r : f2.regions) r.density *= 2.5;
    CHECK(d_interaction(f2, g) == Approx(2.5 * d_interaction(f, g)).epsilon(1e-9));
  }
}

TEST_CASE("positivity of D for neutral systems") {
  ChargeSystem dipole{{{Vector2d(0, 0), 0.2, 1.0}, {Vector2d(1.0, 0.0), 0.3, -1.0}}, {}};
  CHECK(d_self(dipole) >= 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ur(0.05, 0.8);
  double worst = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    ChargeSystem f;
    double q = 0.0;
    const int n = 2 + trial % 5;
    for (int i = 0; i < n; ++i) {
      f.disks.push_back({Vector2d(u(rng), u(rng)), ur(rng), u(rng)});
      q += f.disks.back().charge;
    }
    if (trial % 2 == 0) {
      const auto Q = square(u(rng), u(rng), 0.3 + ur(rng));
      f.regions.push_back({single(Q), -q / Q.area()});
    } else {
      f.disks.push_back({Vector2d(u(rng), u(rng)), ur(rng), -q});
    }
    REQUIRE(std::abs(f.total_charge()) < 1e-12);
    worst = std::min(worst, d_self(f));
  }
  CHECK(worst >= -1e-8);
}

TEST_CASE("Lieb-Narnhofer bound") {
  const auto opt = lieb_narnhofer_optimal();
  CHECK(opt.a == Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(opt.a == Approx(0.5642).epsilon(1e-4));
  CHECK(opt.bound == Approx(-0.66118).epsilon(1e-5));
  CHECK(lieb_narnhofer_bound(1.0) == Approx(-0.125 - kPi / 4).epsilon(1e-15));
  CHECK(lieb_narnhofer_bound(1.0) == Approx(-0.910398).epsilon(1e-6));
  CHECK(lieb_narnhofer_bound(opt.a + 0.1) < opt.bound);
  CHECK(lieb_narnhofer_bound(opt.a - 0.1) < opt.bound);
  CHECK_THROWS_AS(lieb_narnhofer_bound(0.0), DomainError);
}

TEST_CASE("lower-bound decomposition on the 19-point patch") {
  const auto pts = hex_patch_points(2);
  REQUIRE(pts.size() == 19);
  const auto dec = lower_bound_decomposition(hex_patch(2), pts, 0.3);
  CHECK(dec.balls_disjoint);
  CHECK(dec.balls_inside);
  CHECK(dec.alpha >= -1e-8);
  CHECK(dec.delta == 0.0);
  CHECK(dec.beta_exact == Approx(dec.beta_bound).epsilon(1e-10));  // balls inside: Newton bound is exact
  CHECK(dec.gamma == Approx(9.5 * (std::log(0.3) - 0.25)).epsilon(1e-14));
  CHECK(std::abs(dec.residual) < 1e-8);
  CHECK(dec.bound <= dec.energy);

  const auto wide = lower_bound_decomposition(hex_patch(2), pts, 0.7);
  CHECK_FALSE(wide.balls_disjoint);
  CHECK(wide.delta > 0.0);
  CHECK(wide.alpha >= -1e-8);
  CHECK(wide.beta_exact >= wide.beta_bound);
  CHECK(std::abs(wide.residual) < 1e-8);
}

TEST_CASE("lower bound holds for random configurations") {
  std::mt19937_64 rng(31);
  const PolygonalDomain H = hex_patch(2);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  const double a = lieb_narnhofer_optimal().a;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vector2d> pts;
    while (pts.size() < 19) {
      Vector2d p(u(rng), u(rng));
      bool inside = false;
      for (const auto& c : H.polygons) inside = inside || c.contains(p);
      if (inside) pts.push_back(p);
    }
    const auto dec = lower_bound_decomposition(H, pts, a);
    CHECK(dec.bound <= dec.energy);
    CHECK(dec.alpha >= -1e-8);
    CHECK(dec.delta >= 0.0);
    CHECK(std::abs(dec.residual) < 1e-7);
    CHECK(dec.energy / 19.0 >= lieb_narnhofer_optimal().bound - 1e-9);
  }
}

TEST_CASE("domain JSON round trip and CSV breakdown") {
  PolygonalDomain H = hex_patch(1);
  H.disks.push_back({Vector2d(5, 5), 0.5});
  const auto back = domain_from_json(to_json(H));
  CHECK(back.polygons.size() == 7);
  CHECK(back.total_area() == Approx(H.total_area()).epsilon(1e-15));
  const auto r = jellium_energy(hex_patch(1), hex_patch_points(1));
  const std::string csv = breakdown_csv(r, 1e-8);
  CHECK(csv.rfind("term,value,tol\n", 0) == 0);
  CHECK(csv.find("self_term,") != std::string::npos);
}
