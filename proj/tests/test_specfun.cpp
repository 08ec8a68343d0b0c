#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jellium/error.hpp"
#include "jellium/specfun.hpp"
#include "oracles.hpp"

using namespace jellium;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("gamma: identities, Lanczos and quadrature oracles") {
  CHECK(specfun::gamma(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(specfun::gamma(0.5) == Approx(std::sqrt(pi)).epsilon(1e-14));

  // Gamma(1/6) = 6 * int_0^inf exp(-u^6) du after t = u^6.
  const double quad = 6.0 * oracle::adaptive_simpson([](double u) { return std::exp(-std::pow(u, 6)); },
                                                     0.0, 6.0, 1e-15);
  const double g16 = specfun::gamma(1.0 / 6.0);
  CHECK(g16 == Approx(quad).epsilon(1e-12));
  CHECK(g16 == Approx(oracle::lanczos_gamma(1.0 / 6.0)).epsilon(1e-13));
  CHECK(g16 == Approx(5.5663160017802).epsilon(1e-12));

  for (double x = 1.0 / 6.0; x <= 30.0; x += 0.37) {
    CHECK(specfun::gamma(x) == Approx(oracle::lanczos_gamma(x)).epsilon(1e-13));
    CHECK(specfun::log_gamma(x) == Approx(std::log(oracle::lanczos_gamma(x))).epsilon(1e-13));
  }
}

TEST_CASE("gamma: poles and domain") {
  CHECK_THROWS_AS(specfun::gamma(0.0), DomainError);
  CHECK_THROWS_AS(specfun::gamma(-3.0), DomainError);
  CHECK_THROWS_AS(specfun::log_gamma(-0.5), DomainError);
  CHECK(specfun::reciprocal_gamma(-2.0) == 0.0);
  CHECK(specfun::reciprocal_gamma(0.5) == Approx(1.0 / std::sqrt(pi)));
}

TEST_CASE("riemann zeta values") {
  CHECK(specfun::riemann_zeta(2.0) == Approx(pi * pi / 6.0).epsilon(1e-15));
  CHECK(std::abs(specfun::riemann_zeta(0.0) + 0.5) < 1e-14);
  CHECK(std::abs(specfun::riemann_zeta(-1.0) + 1.0 / 12.0) < 1e-14);
  CHECK(std::abs(specfun::riemann_zeta(-2.0)) < 1e-12);
  CHECK(std::abs(specfun::riemann_zeta(-3.0) - 1.0 / 120.0) < 1e-12);
  CHECK(std::abs(specfun::riemann_zeta(-4.0)) < 1e-12);
  CHECK(std::abs(specfun::riemann_zeta(0.5) + 1.4603545088095868) < 1e-12);
  CHECK_THROWS_AS(specfun::riemann_zeta(1.0), PoleError);
  CHECK_THROWS_AS(specfun::riemann_zeta_deriv(1.0), PoleError);
}

TEST_CASE("riemann zeta matches the direct series for s >= 2") {
  for (double s = 2.0; s <= 20.0; s += 0.45) {
    CHECK(std::abs(specfun::riemann_zeta(s) - oracle::zeta_direct(s)) < 1e-10);
  }
}

TEST_CASE("zeta derivative") {
  // Lerch: zeta'(0, a) = log Gamma(a) - log(2 pi)/2, so zeta'(0) = -log(2 pi)/2.
  CHECK(std::abs(specfun::riemann_zeta_deriv(0.0) + 0.5 * std::log(2.0 * pi)) < 1e-13);
  for (double a : {0.2, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.7}) {
    CHECK(std::abs(specfun::hurwitz_zeta_deriv(0.0, a) - (std::lgamma(a) - 0.5 * std::log(2.0 * pi))) <
          1e-13);
  }
  // Derivative against Richardson-extrapolated central differences of the value.
  for (double s : {-3.3, -1.0, 0.4, 2.5, 7.0}) {
    auto f = [](double x) { return specfun::riemann_zeta(x); };
    const double h = 5e-3;
    const double d1 = (f(s + h) - f(s - h)) / (2 * h);
    const double d2 = (f(s + h / 2) - f(s - h / 2)) / h;
    const double rich = (4.0 * d2 - d1) / 3.0;
    CHECK(std::abs(specfun::riemann_zeta_deriv(s) - rich) < 1e-8);
  }
  CHECK(specfun::riemann_zeta_deriv(2.0) == Approx(-0.93754825431584375).epsilon(1e-13));
}

TEST_CASE("hurwitz zeta reductions and errors") {
  for (double s : {2.0, 3.0, -1.0}) {
    CHECK(std::abs(specfun::hurwitz_zeta(s, 1.0) - specfun::riemann_zeta(s)) < 1e-14);
  }
  CHECK(specfun::hurwitz_zeta(2.0, 0.5) == Approx(pi * pi / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(specfun::hurwitz_zeta(1.0, 0.5), PoleError);
  CHECK_THROWS_AS(specfun::hurwitz_zeta(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(specfun::hurwitz_zeta(2.0, -1.0), DomainError);
}

TEST_CASE("hurwitz difference feeding L3 at s = 1/2") {
  // sum_k [(k+1/3)^{-s} - (k+2/3)^{-s}] converges for s > 0; partial sum plus
  // integral tail and half end term.
  const double s = 0.5;
  const int K = 200000;
  double sum = 0.0;
  for (int k = 0; k < K; ++k) sum += std::pow(k + 1.0 / 3.0, -s) - std::pow(k + 2.0 / 3.0, -s);
  const auto F = [s](double k) { return std::pow(k + 1.0 / 3.0, 1 - s) - std::pow(k + 2.0 / 3.0, 1 - s); };
  sum += -F(K) / (1.0 - s) + 0.5 * (std::pow(K + 1.0 / 3.0, -s) - std::pow(K + 2.0 / 3.0, -s));
  const double direct = specfun::hurwitz_zeta(s, 1.0 / 3.0) - specfun::hurwitz_zeta(s, 2.0 / 3.0);
  CHECK(std::abs(direct - sum) < 1e-11);
  CHECK(std::abs(specfun::hurwitz_zeta_diff(s, 1.0 / 3.0, 2.0 / 3.0) - sum) < 1e-11);
}

TEST_CASE("hurwitz shift property") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(-4.0, 12.0), ua(0.05, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double s = us(rng), a = ua(rng);
    if (std::abs(s - 1.0) < 1e-3) continue;
    const double lhs = specfun::hurwitz_zeta(s, a) - specfun::hurwitz_zeta(s, a + 1.0);
    CHECK(std::abs(lhs - std::pow(a, -s)) < 1e-11 * std::max(1.0, std::pow(a, -s)));
  }
}

TEST_CASE("dirichlet L3") {
  CHECK(std::abs(specfun::dirichlet_l3(0.0) - 1.0 / 3.0) < 1e-13);
  // Grouped series sum_k [1/(3k+1) - 1/(3k+2)] with integral tail.
  const int K = 400000;
  double alt = 0.0;
  for (int k = 0; k < K; ++k) alt += 1.0 / (3.0 * k + 1.0) - 1.0 / (3.0 * k + 2.0);
  alt += std::log((3.0 * K + 2.0) / (3.0 * K + 1.0)) / 3.0 + 0.5 * (1.0 / (3.0 * K + 1) - 1.0 / (3.0 * K + 2));
  CHECK(std::abs(specfun::dirichlet_l3(1.0) - alt) < 1e-11);
  CHECK(std::abs(specfun::dirichlet_l3(1.0) - pi / std::pow(3.0, 1.5)) < 1e-12);

  // s = 2 absolutely convergent.
  double direct = 0.0;
  for (int n = 1; n < 2000000; ++n) {
    const int r = n % 3;
    if (r == 1) direct += 1.0 / (double(n) * n);
    if (r == 2) direct -= 1.0 / (double(n) * n);
  }
  CHECK(std::abs(specfun::dirichlet_l3(2.0) - direct) < 1e-11);
  CHECK(specfun::dirichlet_l3(2.0) == Approx(0.7813024128964862).epsilon(1e-12));

  // L3'(0) = -log(3)/3 + log Gamma(1/3) - log Gamma(2/3) by Lerch.
  const double lerch = -std::log(3.0) / 3.0 + std::lgamma(1.0 / 3.0) - std::lgamma(2.0 / 3.0);
  CHECK(std::abs(specfun::dirichlet_l3_deriv(0.0) - lerch) < 1e-12);
}

TEST_CASE("dirichlet beta") {
  CHECK(std::abs(specfun::dirichlet_beta(1.0) - pi / 4.0) < 1e-13);
  CHECK(std::abs(specfun::dirichlet_beta(0.0) - 0.5) < 1e-13);
  const double lerch = -std::log(4.0) / 2.0 + std::lgamma(0.25) - std::lgamma(0.75);
  CHECK(std::abs(specfun::dirichlet_beta_deriv(0.0) - lerch) < 1e-12);
}

TEST_CASE("upper incomplete gamma") {
  CHECK(specfun::upper_incomplete_gamma(1.0, 1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(specfun::upper_incomplete_gamma(0.5, 1.0) == Approx(std::sqrt(pi) * std::erfc(1.0)).epsilon(1e-13));
  const double q = oracle::adaptive_simpson(
      [](double u) {
        const double t = 1.0 + u * u;  // t = 1 + u^2 smooths the exponential tail
        return 2.0 * u * std::exp(-t) / std::sqrt(t);
      },
      0.0, 7.0, 1e-15);
  CHECK(specfun::upper_incomplete_gamma(0.5, 1.0) == Approx(q).epsilon(1e-12));
  const double qm = oracle::adaptive_simpson(
      [](double u) {
        const double t = 1.0 + u * u;
        return 2.0 * u * std::exp(-t) * std::pow(t, -1.5);
      },
      0.0, 7.0, 1e-15);
  CHECK(specfun::upper_incomplete_gamma(-0.5, 1.0) == Approx(qm).epsilon(1e-12));
  CHECK(specfun::upper_incomplete_gamma(0.0, 0.7) == Approx(specfun::expint_e1(0.7)).epsilon(1e-15));
  CHECK(specfun::expint_e1(1.0) == Approx(0.21938393439552027).epsilon(1e-14));
  CHECK(specfun::expint_e1(0.1) == Approx(1.8229239584193906).epsilon(1e-14));
  CHECK(specfun::expint_e1(5.0) == Approx(0.0011482955912753257).epsilon(1e-13));
  CHECK_THROWS_AS(specfun::upper_incomplete_gamma(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(specfun::upper_incomplete_gamma(0.5, -1.0), DomainError);
}

TEST_CASE("incomplete gamma recurrence") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ux(0.05, 20.0);
  for (int i = 0; i < 400; ++i) {
    const double a = ua(rng), x = ux(rng);
    const double lhs = specfun::upper_incomplete_gamma(a + 1.0, x);
    const double rhs = a * specfun::upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(std::abs(lhs), 1e-300) + 1e-300);
  }
  // negative integer orders against the closed form in E1
  for (double x : {0.3, 1.0, 2.5, 9.0}) {
    const double e1 = specfun::expint_e1(x);
    const double gm1 = std::exp(-x) / x - e1;
    CHECK(specfun::upper_incomplete_gamma(-1.0, x) == Approx(gm1).epsilon(1e-12));
  }
}

TEST_CASE("precision spec validation") {
  CHECK_THROWS_AS((specfun::PrecisionSpec{0.0, 10}.validate()), DomainError);
  CHECK_THROWS_AS((specfun::PrecisionSpec{1e-10, 0}.validate()), DomainError);
  CHECK_NOTHROW((specfun::PrecisionSpec{1e-10, 1}.validate()));
}
