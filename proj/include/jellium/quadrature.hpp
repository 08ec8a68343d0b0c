#pragma once

// Small fixed-rule quadrature toolkit shared by the geometry and Ewald code.

#include <cmath>
#include <vector>

namespace jellium::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss–Legendre rule with n points, computed once and cached.
const GaussRule& gauss_legendre(int n);

template <class F>
double gauss(F&& f, double a, double b, int n = 16) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

/// Integrates over [t0, t1] with 0 <= t0 < t1 for an integrand whose nearest
/// complex singularity sits at distance `scale` from t = 0. Panels grow
/// geometrically so each panel's length never exceeds its distance to the
/// singularity.
template <class F>
double graded(F&& f, double t0, double t1, double scale, int n = 16) {
  double sum = 0.0;
  double lo = t0;
  while (lo < t1) {
    const double hi = std::min(t1, lo + std::max(scale, lo));
    sum += gauss(f, lo, hi, n);
    lo = hi;
  }
  return sum;
}

/// Double-exponential (tanh-sinh) rule on [a, b]; tolerant of integrable
/// endpoint singularities. The integrand receives (x, distance to the nearer
/// endpoint) so it can avoid cancellation close to the ends.
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-13) {
  const double half = 0.5 * (b - a);
  constexpr double pi_2 = 1.5707963267948966;
  constexpr double t_max = 4.5;
  auto eval = [&](double t) {
    const double u = pi_2 * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = pi_2 * std::cosh(t) / (ch * ch);
    const double x = std::tanh(u);
    const double gap = half / (std::exp(std::abs(u)) * ch);  // half * (1 - |x|)
    if (!(gap > 0.0)) return 0.0;
    const double pt = x >= 0.0 ? b - gap : a + gap;
    return w * f(pt, gap);
  };
  double h = 0.5;
  double sum = eval(0.0);
  for (double t = h; t <= t_max; t += h) sum += eval(t) + eval(-t);
  double estimate = sum * h;
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) sum += eval(t) + eval(-t);
    const double next = sum * h;
    const bool done = std::abs(next - estimate) <= tol * std::max(1.0, std::abs(next));
    estimate = next;
    if (done && level >= 2) break;
  }
  return estimate * half;
}

}  // namespace jellium::quad
