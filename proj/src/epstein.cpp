#include "jellium/epstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jellium/error.hpp"
#include "jellium/geometry.hpp"
#include "jellium/parallel.hpp"
#include "jellium/specfun.hpp"

namespace jellium {

namespace {

constexpr double kPi = std::numbers::pi;

void require_normalized(const Lattice& L, const char* who) {
  if (!L.is_normalized(1e-10))
    throw NormalizationError(std::string(who) + ": lattice must have covolume 1 (got " +
                             std::to_string(L.covolume()) + ")");
}

// Exponent X with e^{-X} far below tol, padded for the polynomial prefactors.
double gaussian_cut(double tol) { return std::log(1.0 / tol) + 12.0; }

struct Radii {
  double direct, dual;
};

Radii ewald_radii(const EwaldParams& p) {
  if (p.shell_cutoff > 0.0) return {p.shell_cutoff, p.shell_cutoff};
  const double X = gaussian_cut(p.tol);
  return {std::sqrt(X / (kPi * p.split)), std::sqrt(X * p.split / kPi)};
}

// Sum of f(|x|) over nonzero x with |x| <= R, plus the same sum over the next
// band (R, R + width] reported separately as a truncation estimate.
template <class F>
std::pair<double, double> banded_sum(const Lattice& L, double R, F&& f) {
  const double width = L.basis().colwise().norm().maxCoeff();
  auto vecs = lattice_vectors(L, R + width);
  std::vector<double> norms;
  norms.reserve(vecs.size());
  for (const auto& v : vecs) norms.push_back(v.norm());
  // Largest terms last keeps the rounding of the many small terms intact.
  std::sort(norms.begin(), norms.end(), std::greater<>());
  double inner = 0.0, band = 0.0;
  for (double r : norms) (r <= R ? inner : band) += f(r);
  return {inner, band};
}

}  // namespace

void EwaldParams::validate() const {
  if (!(split > 0.0)) throw DomainError("EwaldParams: split must be positive");
  if (!(tol > 0.0)) throw DomainError("EwaldParams: tol must be positive");
  if (shell_cutoff < 0.0) throw DomainError("EwaldParams: shell_cutoff must be non-negative");
}

double riesz_potential(double s, const Eigen::VectorXd& x) {
  const double r = x.norm();
  if (r == 0.0) throw SingularityError("riesz_potential: x = 0");
  if (s > 0.0) return std::pow(r, -s);
  if (s == 0.0) return -std::log(r);
  return -std::pow(r, -s);
}

EpsteinResult epstein_zeta_report(const Lattice& L, double s, const EwaldParams& p) {
  p.validate();
  require_normalized(L, "epstein_zeta");
  const int d = L.dimension();
  if (s == d) throw PoleError("epstein_zeta: pole at s = d");
  const double eta = p.split;
  const Radii radii = ewald_radii(p);
  const Lattice D = dual(L);

  const double a = 0.5 * s, b = 0.5 * (d - s);
  const auto [direct, direct_band] = banded_sum(L, radii.direct, [&](double r) {
    return std::pow(kPi, -a) * std::pow(r, -s) * specfun::upper_incomplete_gamma(a, kPi * r * r * eta);
  });
  const auto [mirror, mirror_band] = banded_sum(D, radii.dual, [&](double k) {
    return std::pow(kPi, -b) * std::pow(k, s - d) * specfun::upper_incomplete_gamma(b, kPi * k * k / eta);
  });
  // Lambda(s) = -2 eta^{s/2}/s + R(s); the 1/s pole is absorbed by 1/Gamma(s/2).
  const double R = -2.0 * std::pow(eta, -b) / (d - s) + direct + mirror;
  const double pis = std::pow(kPi, a);
  const double value =
      0.5 * (-std::pow(eta, a) * pis * specfun::reciprocal_gamma(1.0 + a) + pis * specfun::reciprocal_gamma(a) * R);
  const double err = 0.5 * pis * std::abs(specfun::reciprocal_gamma(a)) * (std::abs(direct_band) + std::abs(mirror_band));
  return {value, err, "ewald"};
}

double epstein_zeta(const Lattice& L, double s, const EwaldParams& p) { return epstein_zeta_report(L, s, p).value; }

EpsteinResult epstein_zeta_deriv0_report(const Lattice& L, const EwaldParams& p) {
  p.validate();
  require_normalized(L, "epstein_zeta_deriv0");
  const int d = L.dimension();
  const double eta = p.split;
  const Radii radii = ewald_radii(p);
  const Lattice D = dual(L);
  const double b = 0.5 * d;
  const auto [direct, direct_band] =
      banded_sum(L, radii.direct, [&](double r) { return specfun::expint_e1(kPi * r * r * eta); });
  const auto [mirror, mirror_band] = banded_sum(D, radii.dual, [&](double k) {
    return std::pow(kPi, -b) * std::pow(k, -d) * specfun::upper_incomplete_gamma(b, kPi * k * k / eta);
  });
  const double R0 = -2.0 * std::pow(eta, -b) / d + direct + mirror;
  const double value = 0.25 * (R0 - std::log(eta) - std::numbers::egamma - std::log(kPi));
  return {value, 0.25 * (std::abs(direct_band) + std::abs(mirror_band)), "ewald"};
}

double epstein_zeta_deriv0(const Lattice& L, const EwaldParams& p) { return epstein_zeta_deriv0_report(L, p).value; }

double closed_form_triangular(double s) {
  if (s == 2.0) throw PoleError("closed_form_triangular: pole at s = 2");
  const double c = std::sqrt(2.0 / std::sqrt(3.0));
  return 3.0 * std::pow(c, -s) * specfun::riemann_zeta(0.5 * s) * specfun::dirichlet_l3(0.5 * s);
}

double closed_form_triangular_deriv0() {
  const double log_c = 0.5 * std::log(2.0 / std::sqrt(3.0));
  const double z0 = specfun::riemann_zeta(0.0), dz0 = specfun::riemann_zeta_deriv(0.0);
  const double l0 = specfun::dirichlet_l3(0.0), dl0 = specfun::dirichlet_l3_deriv(0.0);
  return 3.0 * (-log_c * z0 * l0 + 0.5 * dz0 * l0 + 0.5 * z0 * dl0);
}

EpsteinResult lattice_jellium_energy_report(const Lattice& L, double s, const EwaldParams& p) {
  const int d = L.dimension();
  if (!(s > d - 4 && s < d)) throw RangeError("lattice_jellium_energy: need d - 4 < s < d");
  if (s == 0.0) return epstein_zeta_deriv0_report(L, p);
  EpsteinResult r = epstein_zeta_report(L, s, p);
  if (s < 0.0) r.value = -r.value;
  return r;
}

double lattice_jellium_energy(const Lattice& L, double s, const EwaldParams& p) {
  return lattice_jellium_energy_report(L, s, p).value;
}

namespace {

DirectSumResult w_sum(const Lattice& L, const geom::RadialKernel& kernel, double quad_tol) {
  if (!(quad_tol > 0.0)) throw DomainError("direct_w_sum: quad_tol must be positive");
  const Cell cell = wigner_seitz(L);
  geom::Polygon Q{cell.vertices};
  const auto edges = Q.edges();
  const double s = kernel.exponent();
  const double decay = s + 4.0;  // W ~ |x|^{-s-4}

  auto w_tilde = [&](const Eigen::Vector2d& x) {
    std::vector<geom::Segment> shifted = edges;
    for (auto& e : shifted) {
      e.a += x;
      e.b += x;
    }
    return kernel.value(x.norm()) - 2.0 * geom::region_potential(edges, x, kernel) +
           geom::region_pair_integral(edges, shifted, kernel);
  };

  struct ShellSum {
    double radius, sum, max_abs;
  };
  std::vector<ShellSum> done;
  constexpr double kMaxRadius = 160.0;
  double R = 8.0;
  double tail = 0.0;
  std::size_t terms = 0;
  for (;;) {
    const auto sh = shells(L, R);
    std::vector<Eigen::Vector2d> todo;
    std::vector<std::size_t> owner;
    for (std::size_t i = done.size(); i < sh.size(); ++i)
      for (const auto& v : sh[i].points) {
        todo.emplace_back(v);
        owner.push_back(i);
      }
    const auto vals = parallel_map(todo.size(), [&](std::size_t i) { return w_tilde(todo[i]); });
    terms += vals.size();
    for (std::size_t i = done.size(); i < sh.size(); ++i) done.push_back({sh[i].radius, 0.0, 0.0});
    for (std::size_t i = 0; i < vals.size(); ++i) {
      done[owner[i]].sum += vals[i];
      done[owner[i]].max_abs = std::max(done[owner[i]].max_abs, std::abs(vals[i]));
    }
    double K = 0.0;
    for (std::size_t i = done.size() >= 5 ? done.size() - 5 : 0; i < done.size(); ++i)
      K = std::max(K, done[i].max_abs * std::pow(done[i].radius, decay));
    // (1/2) sum_{|x| > R} K |x|^{-decay}, lattice density 1
    tail = 0.5 * K * 2.0 * kPi * std::pow(R, 2.0 - decay) / (decay - 2.0);
    if (tail <= quad_tol) break;
    if (R >= kMaxRadius) {
      std::ostringstream msg;
      msg << "direct_w_sum: tail bound " << tail << " above quad_tol " << quad_tol << " at radius " << R;
      throw AccuracyError(msg.str(), tail);
    }
    R = std::min(kMaxRadius, 1.35 * R);
  }

  DirectSumResult out;
  double lattice_part = 0.0;
  for (auto it = done.rbegin(); it != done.rend(); ++it) lattice_part += it->sum;
  const double self = -geom::region_potential(edges, Eigen::Vector2d::Zero(), kernel) +
                      0.5 * geom::region_pair_integral(edges, edges, kernel);
  out.value = 0.5 * lattice_part + self;
  out.tail_bound = tail;
  out.radius = done.empty() ? 0.0 : done.back().radius;
  out.terms = terms;
  for (std::size_t i = done.size() >= 5 ? done.size() - 5 : 0; i < done.size(); ++i)
    out.outer.push_back({done[i].radius, done[i].max_abs * std::pow(done[i].radius, decay)});
  return out;
}

void check_w_sum_lattice(const Lattice& L) {
  if (L.dimension() != 2) throw UnsupportedError("direct_w_sum: only d = 2 is supported");
  require_normalized(L, "direct_w_sum");
}

}  // namespace

DirectSumResult direct_w_sum(const Lattice& L, double s, double quad_tol) {
  check_w_sum_lattice(L);
  if (!(s >= 0.0 && s < 2.0)) throw RangeError("direct_w_sum: need 0 <= s < 2");
  return w_sum(L, geom::RadialKernel::power(s), quad_tol);
}

DirectSumResult direct_w_sum_deriv0(const Lattice& L, double quad_tol) {
  check_w_sum_lattice(L);
  return w_sum(L, geom::RadialKernel::neg_log(), quad_tol);
}

}  // namespace jellium
