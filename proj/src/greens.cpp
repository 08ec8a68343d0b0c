#include "jellium/greens.hpp"

#include <cmath>
#include <numbers>

#include "jellium/error.hpp"
#include "jellium/specfun.hpp"

namespace jellium {

namespace {

constexpr double kPi = std::numbers::pi;

double cut_exponent(double tol) { return std::log(1.0 / tol) + 10.0; }

}  // namespace

Torus::Torus(Lattice periods) : periods_(std::move(periods)) {
  if (periods_.dimension() != 2) throw UnsupportedError("Torus: only two-dimensional tori are supported");
  inverse_ = periods_.basis().inverse();
}

Torus Torus::square(double ell) {
  if (!(ell > 0.0)) throw DomainError("Torus::square: side must be positive");
  return Torus(Lattice(Eigen::Matrix2d::Identity() * ell));
}

Torus Torus::commensurate(const Lattice& L, int m) {
  if (L.dimension() != 2) throw UnsupportedError("Torus::commensurate: only d = 2");
  if (m < 1) throw DomainError("Torus::commensurate: m must be >= 1");
  return Torus(scaled(L, m));
}

Eigen::Vector2d Torus::reduce(const Eigen::Vector2d& x) const {
  Eigen::Vector2d t = inverse_ * x;
  for (int i = 0; i < 2; ++i) {
    t[i] -= std::floor(t[i]);
    if (t[i] >= 1.0) t[i] = 0.0;
  }
  return periods_.basis() * t;
}

Eigen::Vector2d Torus::centered(const Eigen::Vector2d& x) const {
  Eigen::Vector2d t = inverse_ * x;
  for (int i = 0; i < 2; ++i) t[i] -= std::floor(t[i] + 0.5);
  return periods_.basis() * t;
}

double Torus::distance_to_lattice(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d c = centered(x);
  const Eigen::Matrix2d B = periods_.basis();
  double best = c.norm();
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) best = std::min(best, (c + B * Eigen::Vector2d(i, j)).norm());
  return best;
}

std::vector<Eigen::Vector2d> sublattice_points(const Lattice& L, int m) {
  if (L.dimension() != 2) throw UnsupportedError("sublattice_points: only d = 2");
  if (m < 1) throw DomainError("sublattice_points: m must be >= 1");
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) pts.push_back(L.basis() * Eigen::Vector2d(i, j));
  return pts;
}

namespace detail {

EwaldSetup ewald_setup(const Torus& T, double alpha, double tol) {
  if (!(alpha > 0.0)) throw DomainError("ewald_setup: alpha must be positive");
  if (!(tol > 0.0)) throw DomainError("ewald_setup: tol must be positive");
  EwaldSetup e;
  e.alpha = alpha;
  const double X = cut_exponent(tol);
  e.real_cut = std::sqrt(X / alpha);
  // centered points are at most half the sum of the basis lengths from 0
  const double diam = 0.5 * T.basis().colwise().norm().sum();
  e.real_vectors.push_back(Eigen::Vector2d::Zero());
  for (const auto& v : lattice_vectors(T.periods(), e.real_cut + diam)) e.real_vectors.emplace_back(v);
  const double k_cut = 2.0 * std::sqrt(alpha * X);
  for (const auto& q : lattice_vectors(dual(T.periods()), k_cut / (2.0 * kPi))) {
    const Eigen::Vector2d k = 2.0 * kPi * Eigen::Vector2d(q);
    const double k2 = k.squaredNorm();
    e.wavevectors.push_back(k);
    e.k_weight.push_back(2.0 * kPi / T.area() * std::exp(-k2 / (4.0 * alpha)) / k2);
  }
  return e;
}

double real_space_sum(const EwaldSetup& e, const Eigen::Vector2d& x, bool skip_origin) {
  const double cut2 = e.real_cut * e.real_cut;
  double sum = 0.0;
  for (const auto& v : e.real_vectors) {
    const double r2 = (x + v).squaredNorm();
    if (r2 > cut2) continue;
    if (r2 == 0.0) {
      if (skip_origin) continue;
      throw SingularityError("g_periodic: x coincides with a period vector");
    }
    sum += 0.5 * specfun::expint_e1(e.alpha * r2);
  }
  return sum;
}

Eigen::Vector2d real_space_gradient(const EwaldSetup& e, const Eigen::Vector2d& x) {
  const double cut2 = e.real_cut * e.real_cut;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& v : e.real_vectors) {
    const Eigen::Vector2d y = x + v;
    const double r2 = y.squaredNorm();
    if (r2 > cut2 || r2 == 0.0) continue;
    g -= std::exp(-e.alpha * r2) / r2 * y;
  }
  return g;
}

double self_constant(const EwaldSetup& e, double area) {
  double ksum = 0.0;
  for (double w : e.k_weight) ksum += w;
  return real_space_sum(e, Eigen::Vector2d::Zero(), true) - 0.5 * (std::numbers::egamma + std::log(e.alpha)) -
         kPi / (2.0 * e.alpha * area) + ksum;
}

}  // namespace detail

namespace {

detail::EwaldSetup setup_for(const Torus& T, const EwaldParams& p) {
  p.validate();
  return detail::ewald_setup(T, p.split * kPi / T.area(), p.tol);
}

}  // namespace

double g_periodic(const Torus& T, const Eigen::Vector2d& x, const EwaldParams& p) {
  const Eigen::Vector2d c = T.centered(x);
  if (T.distance_to_lattice(c) == 0.0)
    throw SingularityError("g_periodic: x is congruent to 0 on the torus");
  const auto e = setup_for(T, p);
  double ksum = 0.0;
  for (std::size_t i = 0; i < e.wavevectors.size(); ++i) ksum += e.k_weight[i] * std::cos(e.wavevectors[i].dot(c));
  return detail::real_space_sum(e, c, false) - kPi / (2.0 * e.alpha * T.area()) + ksum;
}

Eigen::Vector2d g_periodic_gradient(const Torus& T, const Eigen::Vector2d& x, const EwaldParams& p) {
  const Eigen::Vector2d c = T.centered(x);
  if (T.distance_to_lattice(c) == 0.0)
    throw SingularityError("g_periodic_gradient: x is congruent to 0 on the torus");
  const auto e = setup_for(T, p);
  Eigen::Vector2d g = detail::real_space_gradient(e, c);
  for (std::size_t i = 0; i < e.wavevectors.size(); ++i)
    g -= e.k_weight[i] * std::sin(e.wavevectors[i].dot(c)) * e.wavevectors[i];
  return g;
}

double self_constant(const Torus& T, const EwaldParams& p) {
  return detail::self_constant(setup_for(T, p), T.area());
}

double madelung(const EwaldParams& p) { return self_constant(Torus::square(1.0), p); }

}  // namespace jellium
