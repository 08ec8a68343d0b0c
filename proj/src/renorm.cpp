#include "jellium/renorm.hpp"

#include <cmath>
#include <numbers>

#include "jellium/epstein.hpp"
#include "jellium/error.hpp"
#include "jellium/jellium_finite.hpp"
#include "jellium/specfun.hpp"

namespace jellium {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
}  // namespace

double w_periodic(const PointConfiguration& cfg, const EwaldParams& p) {
  return 2.0 * kPi / cfg.size() * e_per(cfg, p).total;
}

double w_scale(double w, double m) {
  if (!(m > 0.0)) throw DomainError("w_scale: m must be positive");
  return m * (w - 0.25 * std::log(m));
}

double w_scale_consistent(double w, double m) {
  if (!(m > 0.0)) throw DomainError("w_scale_consistent: m must be positive");
  return m * (w - 0.5 * kPi * std::log(m));
}

double c_log_from_w(double w) { return w / kPi + 0.5 * std::log(4.0 * kPi); }

double c_ds(int d, double s) {
  if (d < 1) throw RangeError("c_ds: dimension must be >= 1");
  const double lo = std::max(0.0, d - 2.0);
  if (!(s >= lo && s < d)) throw RangeError("c_ds: need max(0, d-2) <= s < d");
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d);  // 2 pi^{d/2}
  if (s == 0.0 && d <= 2) return 2.0 * kPi;
  if (s == d - 2.0) return (d - 2.0) * sphere / specfun::gamma(0.5 * d);
  return 2.0 * s * sphere * specfun::gamma(0.5 * (s + 2.0 - d)) / specfun::gamma(0.5 * (s + 2.0));
}

const BoundEntry& BoundTable::at(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw DomainError("BoundTable: no entry named " + name);
}

BoundTable bound_table() {
  const double e_tri = closed_form_triangular_deriv0();
  const double e_low = lieb_narnhofer_optimal().bound;
  BoundTable t;
  t.entries.push_back({"min_W_upper", 2.0 * kPi * e_tri, "2 pi zeta'_tri(0)", "triangular lattice energy", -4.1504});
  t.entries.push_back({"min_W_lower", -kPi * (0.75 + 0.5 * std::log(kPi)), "-pi (3/4 + (1/2) log pi) = 2 pi e_bound",
                       "smeared-charge lower bound", -4.1543});
  t.entries.push_back({"steinerberger_W", -0.5 * kPi * (1.0 + kEuler + std::log(kPi)), "-(pi/2)(1 + gamma + log pi)",
                       "earlier lower bound", -4.2756});
  t.entries.push_back({"c_log_lower", c_log_from_w(2.0 * kPi * e_low), "log 2 - 3/4 = c_log_from_w(min_W_lower)",
                       "smeared-charge lower bound", -0.0569});
  t.entries.push_back({"c_log_upper", c_log_from_w(2.0 * kPi * e_tri), "2 e_tri + log(4 pi)/2 = c_log_from_w(min_W_upper)",
                       "triangular lattice energy", -0.0556});
  t.entries.push_back({"steinerberger_c_log", 0.5 * (std::log(4.0) - 1.0 - kEuler), "(log 4 - 1 - gamma)/2",
                       "earlier lower bound", -0.0954});
  return t;
}

nlohmann::json to_json(const BoundTable& t) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& e : t.entries)
    out[e.name] = {{"value", e.value}, {"formula", e.formula}, {"source", e.source}, {"reference", e.reference}};
  return out;
}

}  // namespace jellium
