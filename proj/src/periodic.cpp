#include "jellium/periodic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jellium/error.hpp"
#include "jellium/parallel.hpp"

namespace jellium {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json point_json(const Eigen::Vector2d& p) { return {p.x(), p.y()}; }

}  // namespace

nlohmann::json to_json(const EnergyReport& r) {
  nlohmann::json j = {{"total", r.total},
                      {"pairwise", r.pairwise},
                      {"background", r.background},
                      {"self_term", r.self_term},
                      {"metadata", r.metadata}};
  j["gradient_norm"] = r.gradient_norm ? nlohmann::json(*r.gradient_norm) : nlohmann::json(nullptr);
  return j;
}

PointConfiguration::PointConfiguration(Torus torus, std::vector<Eigen::Vector2d> points)
    : torus_(std::move(torus)), points_(std::move(points)) {
  if (points_.empty()) throw DomainError("PointConfiguration: need at least one point");
  for (auto& p : points_) {
    if (!p.allFinite()) throw DomainError("PointConfiguration: non-finite coordinate");
    p = torus_.reduce(p);
  }
}

double PointConfiguration::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < points_.size(); ++j)
    for (std::size_t k = j + 1; k < points_.size(); ++k)
      best = std::min(best, torus_.distance_to_lattice(points_[j] - points_[k]));
  return best;
}

PointConfiguration PointConfiguration::translated(const Eigen::Vector2d& t) const {
  std::vector<Eigen::Vector2d> moved = points_;
  for (auto& p : moved) p += t;
  return PointConfiguration(torus_, std::move(moved));
}

PointConfiguration sublattice_configuration(const Lattice& L, int m) {
  return PointConfiguration(Torus::commensurate(L, m), sublattice_points(L, m));
}

namespace {

struct Evaluation {
  double pair_real = 0.0;
  double pair_recip = 0.0;
  double self_term = 0.0;
  std::vector<Eigen::Vector2d> grad;
};

Evaluation evaluate(const PointConfiguration& cfg, const EwaldParams& p, bool want_grad) {
  p.validate();
  const std::size_t n = cfg.size();
  if (n > 1 && cfg.min_separation() <= 1e-9)
    throw SingularityError("e_per: coincident points (separation <= 1e-9)");
  const Torus& T = cfg.torus();
  const double A = T.area();
  // Gaussian width tied to the mean spacing, so the work per pair does not
  // grow with n at fixed density.
  const detail::EwaldSetup e = detail::ewald_setup(T, p.split * kPi * n / A, p.tol);
  const auto& x = cfg.points();

  Evaluation out;
  if (want_grad) out.grad.assign(n, Eigen::Vector2d::Zero());

  // Real space: one work item per particle j, pairs k > j.
  struct RowResult {
    double energy = 0.0;
    std::vector<std::pair<std::size_t, Eigen::Vector2d>> forces;
  };
  const auto rows = parallel_map(n, [&](std::size_t j) {
    RowResult r;
    for (std::size_t k = j + 1; k < n; ++k) {
      const Eigen::Vector2d d = T.centered(x[j] - x[k]);
      r.energy += detail::real_space_sum(e, d, false);
      if (want_grad) r.forces.emplace_back(k, detail::real_space_gradient(e, d));
    }
    return r;
  });
  for (std::size_t j = 0; j < n; ++j) {
    out.pair_real += rows[j].energy;
    if (want_grad)
      for (const auto& [k, g] : rows[j].forces) {
        out.grad[j] += g;
        out.grad[k] -= g;
      }
  }
  out.pair_real -= 0.5 * n * (n - 1.0) * kPi / (2.0 * e.alpha * A);

  // Reciprocal space through structure factors S(k) = sum_j e^{i k x_j}.
  const std::size_t nk = e.wavevectors.size();
  const auto recip = parallel_map(nk, [&](std::size_t i) {
    const Eigen::Vector2d& k = e.wavevectors[i];
    double c = 0.0, s = 0.0;
    for (const auto& xj : x) {
      const double ph = k.dot(xj);
      c += std::cos(ph);
      s += std::sin(ph);
    }
    return std::pair{c, s};
  });
  for (std::size_t i = 0; i < nk; ++i) {
    const auto [c, s] = recip[i];
    out.pair_recip += e.k_weight[i] * 0.5 * (c * c + s * s - n);
  }
  if (want_grad) {
    // d|S|^2/dx_j = 2 k (Im S cos(k x_j) - Re S sin(k x_j))
    const auto recip_grad = parallel_map(n, [&](std::size_t j) {
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      for (std::size_t i = 0; i < nk; ++i) {
        const Eigen::Vector2d& k = e.wavevectors[i];
        const double ph = k.dot(x[j]);
        g += e.k_weight[i] * (recip[i].second * std::cos(ph) - recip[i].first * std::sin(ph)) * k;
      }
      return g;
    });
    for (std::size_t j = 0; j < n; ++j) out.grad[j] += recip_grad[j];
  }
  out.self_term = 0.5 * n * detail::self_constant(e, A);
  return out;
}

EnergyReport make_report(const PointConfiguration& cfg, const Evaluation& ev, const EwaldParams& p) {
  EnergyReport r;
  r.pairwise = ev.pair_real + ev.pair_recip;
  r.self_term = ev.self_term;
  r.total = r.pairwise + r.self_term;
  const bool canonical = std::abs(cfg.density() - 1.0) <= 1e-12;
  r.metadata = {{"backend", "ewald"},
                {"split", p.split},
                {"tol", p.tol},
                {"n", cfg.size()},
                {"area", cfg.torus().area()},
                {"density", cfg.density()},
                {"canonical", canonical},
                {"self_constant", "c_T"}};
  if (!canonical) r.metadata["warning"] = "density differs from 1; values are not comparable to per-particle lattice energies";
  return r;
}

}  // namespace

EnergyReport e_per(const PointConfiguration& cfg, const EwaldParams& p) {
  return make_report(cfg, evaluate(cfg, p, false), p);
}

std::vector<Eigen::Vector2d> e_per_gradient(const PointConfiguration& cfg, const EwaldParams& p) {
  return evaluate(cfg, p, true).grad;
}

EnergyReport e_per_with_gradient(const PointConfiguration& cfg, std::vector<Eigen::Vector2d>& grad,
                                 const EwaldParams& p) {
  Evaluation ev = evaluate(cfg, p, true);
  EnergyReport r = make_report(cfg, ev, p);
  double g2 = 0.0;
  for (const auto& g : ev.grad) g2 += g.squaredNorm();
  r.gradient_norm = std::sqrt(g2);
  grad = std::move(ev.grad);
  return r;
}

nlohmann::json to_json(const Torus& T) {
  return {{"periods", to_json(T.periods())}, {"area", T.area()}};
}

nlohmann::json to_json(const PointConfiguration& cfg) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : cfg.points()) pts.push_back(point_json(p));
  return {{"torus", to_json(cfg.torus())}, {"points", pts}};
}

PointConfiguration configuration_from_json(const nlohmann::json& j) {
  Torus T(lattice_from_json(j.at("torus").at("periods")));
  std::vector<Eigen::Vector2d> pts;
  for (const auto& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return PointConfiguration(T, pts);
}

std::string gradient_csv(const std::vector<Eigen::Vector2d>& grad) {
  std::ostringstream os;
  os.precision(17);
  os << "index,gx,gy\n";
  for (std::size_t i = 0; i < grad.size(); ++i) os << i << ',' << grad[i].x() << ',' << grad[i].y() << '\n';
  return os.str();
}

}  // namespace jellium
