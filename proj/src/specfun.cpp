#include "jellium/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "jellium/error.hpp"

namespace jellium::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// B_{2j} / (2j)! for j = 1..15.
constexpr std::array<double, 15> bernoulli_over_factorial() {
  constexpr std::array<double, 15> num = {
      1.0,       -1.0,      1.0,        -1.0,          5.0,
      -691.0,    7.0,       -3617.0,    43867.0,       -174611.0,
      854513.0,  -236364091.0, 8553103.0, -23749461029.0, 8615841276005.0};
  constexpr std::array<double, 15> den = {6.0,   30.0,  42.0,   30.0,   66.0,
                                          2730.0, 6.0,  510.0,  798.0,  330.0,
                                          138.0, 2730.0, 6.0,   870.0,  14322.0};
  std::array<double, 15> out{};
  double fact = 1.0;
  int k = 0;
  for (int j = 0; j < 15; ++j) {
    // (2j+2)!
    while (k < 2 * j + 2) {
      ++k;
      fact *= k;
    }
    out[j] = num[j] / den[j] / fact;
  }
  return out;
}

constexpr auto kBernoulli = bernoulli_over_factorial();
// Head length of the Euler–Maclaurin split. Negative s uses a shorter head:
// the head and pole terms both grow like x^{1-s} and cancel.
int head_length(double s) { return s < 0.0 ? 8 : 16; }

struct ZetaParts {
  double value = 0.0;
  double deriv = 0.0;
};

// Head sum plus the half term and Bernoulli tail at x = N + a; the pole term
// (x^{1-s}/(s-1)) is left to the caller.
ZetaParts hurwitz_regular_part(double s, double a, bool want_deriv) {
  ZetaParts out;
  const int head = head_length(s);
  for (int k = 0; k < head; ++k) {
    const double lk = std::log(k + a);
    const double t = std::pow(k + a, -s);
    out.value += t;
    if (want_deriv) out.deriv -= lk * t;
  }
  const double x = head + a;
  const double lx = std::log(x);
  const double xs = std::pow(x, -s);
  out.value += 0.5 * xs;
  if (want_deriv) out.deriv -= 0.5 * lx * xs;

  // Rising factorial (s)_{2j-1} and its s-derivative, updated in place.
  double poch = s;
  double dpoch = 1.0;
  double xpow = xs / x;  // x^{-s-1}
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(kBernoulli.size()); ++j) {
    const double term = kBernoulli[j] * poch * xpow;
    if (std::abs(term) > prev) break;  // asymptotic series started to grow
    out.value += term;
    if (want_deriv) out.deriv += kBernoulli[j] * xpow * (dpoch - lx * poch);
    if (std::abs(term) <= 1e-18 * std::abs(out.value) && poch != 0.0) break;
    prev = std::abs(term);
    // advance (s)_{2j+1} -> (s)_{2j+3}
    for (int i : {2 * j + 1, 2 * j + 2}) {
      dpoch = dpoch * (s + i) + poch;
      poch *= (s + i);
    }
    xpow /= x * x;
  }
  return out;
}

void check_hurwitz_args(double s, double a) {
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");
  if (s == 1.0) throw PoleError("hurwitz_zeta: pole at s = 1");
}

// phi(u) = (e^{u la} - e^{u lb}) / u and its u-derivative, stable at u = 0.
std::pair<double, double> pole_difference(double u, double la, double lb) {
  const double scale = std::abs(u) * std::max(std::abs(la), std::abs(lb));
  if (scale <= 2.0) {
    double phi = 0.0, dphi = 0.0;
    double pa = la, pb = lb;  // la^n, lb^n
    double upow = 1.0;        // u^{n-1}
    double upow_d = 0.0;      // (n-1) u^{n-2}
    double fact = 1.0;
    for (int n = 1; n < 80; ++n) {
      fact *= n;
      const double c = (pa - pb) / fact;
      phi += c * upow;
      dphi += c * upow_d;
      if (std::abs(c) * std::max(1.0, std::abs(upow)) < 1e-18 * std::abs(phi) && n > 4) break;
      upow_d = n * upow;
      upow *= u;
      pa *= la;
      pb *= lb;
    }
    return {phi, dphi};
  }
  const double ea = std::exp(u * la), eb = std::exp(u * lb);
  const double phi = eb * std::expm1(u * (la - lb)) / u;
  const double dphi = ((la * ea - lb * eb) * u - (ea - eb)) / (u * u);
  return {phi, dphi};
}

ZetaParts hurwitz_diff_parts(double s, double a, double b, bool want_deriv) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("hurwitz_zeta_diff: a, b must be positive");
  const ZetaParts pa = hurwitz_regular_part(s, a, want_deriv);
  const ZetaParts pb = hurwitz_regular_part(s, b, want_deriv);
  // pole terms: x^{1-s}/(s-1) = -phi(1-s) combined across a and b
  const auto [phi, dphi] = pole_difference(1.0 - s, std::log(head_length(s) + a), std::log(head_length(s) + b));
  return {pa.value - pb.value - phi, pa.deriv - pb.deriv + dphi};
}

// Lower incomplete gamma series; returns gamma(a,x) for a > 0.
double lower_gamma_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps * 0.25) break;
  }
  return sum * std::exp(-x + a * std::log(x));
}

// Legendre continued fraction (modified Lentz) for Gamma(a,x), any real a.
double upper_gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 5000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x)) * h;
    }
  }
  throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge");
}

}  // namespace

void PrecisionSpec::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("PrecisionSpec: abs_tol must be positive");
  if (max_terms < 1) throw DomainError("PrecisionSpec: max_terms must be >= 1");
}

double gamma(double x) {
  if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at non-positive integer");
  return std::tgamma(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

double hurwitz_zeta(double s, double a) {
  check_hurwitz_args(s, a);
  const ZetaParts p = hurwitz_regular_part(s, a, false);
  const double x = head_length(s) + a;
  return p.value + std::pow(x, 1.0 - s) / (s - 1.0);
}

double hurwitz_zeta_deriv(double s, double a) {
  check_hurwitz_args(s, a);
  const ZetaParts p = hurwitz_regular_part(s, a, true);
  const double x = head_length(s) + a;
  const double lx = std::log(x);
  const double xp = std::pow(x, 1.0 - s);
  return p.deriv - xp * (lx / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)));
}

double hurwitz_zeta_diff(double s, double a, double b) {
  return hurwitz_diff_parts(s, a, b, false).value;
}

double hurwitz_zeta_diff_deriv(double s, double a, double b) {
  return hurwitz_diff_parts(s, a, b, true).deriv;
}

double riemann_zeta(double s) {
  if (s == 1.0) throw PoleError("riemann_zeta: pole at s = 1");
  return hurwitz_zeta(s, 1.0);
}

double riemann_zeta_deriv(double s) {
  if (s == 1.0) throw PoleError("riemann_zeta_deriv: pole at s = 1");
  return hurwitz_zeta_deriv(s, 1.0);
}

namespace {

double character_l(double s, double q, double a, double b) {
  return std::pow(q, -s) * hurwitz_zeta_diff(s, a, b);
}

double character_l_deriv(double s, double q, double a, double b) {
  const ZetaParts p = hurwitz_diff_parts(s, a, b, true);
  const double qs = std::pow(q, -s);
  return qs * (p.deriv - std::log(q) * p.value);
}

}  // namespace

double dirichlet_l3(double s) { return character_l(s, 3.0, 1.0 / 3.0, 2.0 / 3.0); }
double dirichlet_l3_deriv(double s) { return character_l_deriv(s, 3.0, 1.0 / 3.0, 2.0 / 3.0); }
double dirichlet_beta(double s) { return character_l(s, 4.0, 0.25, 0.75); }
double dirichlet_beta_deriv(double s) { return character_l_deriv(s, 4.0, 0.25, 0.75); }

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("expint_e1: argument must be positive");
  if (x >= 1.5) return upper_gamma_cf(0.0, x);
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * 1e-2) break;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) throw DomainError("upper_incomplete_gamma: x must be positive");
  if (a > 0.0) {
    if (x < a + 1.0) return std::tgamma(a) - lower_gamma_series(a, x);
    return upper_gamma_cf(a, x);
  }
  if (x >= 1.5) return upper_gamma_cf(a, x);

  // Small x, a <= 0: downward recurrence Gamma(b-1,x) = (Gamma(b,x) - x^{b-1} e^{-x}) / (b-1).
  const double ex = std::exp(-x);
  if (a == std::floor(a)) {
    double g = expint_e1(x);
    for (double b = 0.0; b > a; b -= 1.0) g = (g - std::pow(x, b - 1.0) * ex) / (b - 1.0);
    return g;
  }
  const int m = static_cast<int>(std::ceil(-a)) + 1;
  double b = a + m;
  double g = upper_incomplete_gamma(b, x);
  for (int i = 0; i < m; ++i) {
    g = (g - std::pow(x, b - 1.0) * ex) / (b - 1.0);
    b -= 1.0;
  }
  return g;
}

}  // namespace jellium::specfun
