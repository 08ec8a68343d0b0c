#include "jellium/optimize.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "jellium/error.hpp"
#include "jellium/parallel.hpp"

namespace jellium {

void OptimizerOptions::validate() const {
  if (max_iters < 1) throw DomainError("OptimizerOptions: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw DomainError("OptimizerOptions: grad_tol must be positive");
  if (restarts < 1) throw DomainError("OptimizerOptions: restarts must be >= 1");
  const StepRule& s = step_rule;
  if (!(s.initial > 0.0) || !(s.max_step >= s.initial)) throw DomainError("StepRule: need 0 < initial <= max_step");
  if (!(s.shrink > 0.0 && s.shrink < 1.0)) throw DomainError("StepRule: shrink must lie in (0, 1)");
  if (!(s.grow >= 1.0)) throw DomainError("StepRule: grow must be >= 1");
  if (!(s.armijo_c > 0.0 && s.armijo_c < 1.0)) throw DomainError("StepRule: armijo_c must lie in (0, 1)");
  if (s.max_backtracks < 1) throw DomainError("StepRule: max_backtracks must be >= 1");
}

namespace {

// Gradient descent on a manifold given as flat coordinates. P supplies
//   double eval(const State&, Grad&)   energy and descent-space gradient,
//                                      throws SingularityError for merges
//   State step(const State&, const Grad&, double t)
//   double dot(const Grad&, const Grad&)
template <class P, class State, class Grad>
RunSummary descend(P& prob, State& x, const OptimizerOptions& opts) {
  const StepRule& rule = opts.step_rule;
  RunSummary out;
  Grad g;
  double e = prob.eval(x, g);
  double gn = std::sqrt(prob.dot(g, g));
  double t = rule.initial;
  double next = rule.initial;
  out.trace.push_back({0, e, gn, 0.0});
  out.status = "max_iters";
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (gn < opts.grad_tol) {
      out.status = "converged";
      break;
    }
    bool accepted = false;
    double trial = std::min(rule.max_step, next);
    for (int b = 0; b < rule.max_backtracks; ++b, trial *= rule.shrink) {
      State y = prob.step(x, g, trial);
      Grad gy;
      double ey;
      try {
        ey = prob.eval(y, gy);
      } catch (const SingularityError&) {
        continue;  // merged points: reject and shrink
      }
      if (std::isfinite(ey) && ey <= e - rule.armijo_c * trial * gn * gn) {
        // with s = -t g_old and y = g_new - g_old, the short BB step s.y / y.y
        const double gg = gn * gn, ggy = prob.dot(g, gy), sy = trial * (gg - ggy);
        const double yy = gg - 2.0 * ggy + prob.dot(gy, gy);
        next = trial * rule.grow;
        if (rule.barzilai_borwein && sy > 0.0 && yy > 0.0) next = sy / yy;
        x = std::move(y);
        g = std::move(gy);
        e = ey;
        gn = std::sqrt(prob.dot(g, g));
        t = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.status = "stalled";
      break;
    }
    out.trace.push_back({it + 1, e, gn, t});
  }
  if (it == opts.max_iters && gn < opts.grad_tol) out.status = "converged";
  out.energy = e;
  out.grad_norm = gn;
  out.iterations = static_cast<int>(out.trace.size()) - 1;
  return out;
}

using Points2 = std::vector<Eigen::Vector2d>;
using Points3 = std::vector<Eigen::Vector3d>;

struct TorusProblem {
  const Torus& torus;
  EnergyReport last;

  double eval(const Points2& x, Points2& g) {
    last = e_per_with_gradient(PointConfiguration(torus, x), g);
    return last.total;
  }
  Points2 step(const Points2& x, const Points2& g, double t) {
    Points2 y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = torus.reduce(x[i] - t * g[i]);
    return y;
  }
  double dot(const Points2& a, const Points2& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
  }
};

struct SphereProblem {
  double eval(const Points3& x, Points3& g) {
    const double e = sphere_energy(x);
    g = sphere_tangent_gradient(x);
    return e;
  }
  Points3 step(const Points3& x, const Points3& g, double t) {
    Points3 y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - t * g[i]).normalized();
    return y;
  }
  double dot(const Points3& a, const Points3& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
    return s;
  }
};

// lowest energy, then lowest seed
template <class R>
std::size_t pick_best(const std::vector<R>& runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const auto &a = runs[i]->summary, &b = runs[best]->summary;
    if (a.energy < b.energy || (a.energy == b.energy && a.seed < b.seed)) best = i;
  }
  return best;
}

struct TorusRun {
  PointConfiguration config;
  EnergyReport report;
  RunSummary summary;
};

TorusRun run_torus(const PointConfiguration& init, const OptimizerOptions& opts, std::uint64_t seed) {
  TorusProblem prob{init.torus(), {}};
  Points2 x = init.points();
  RunSummary s = descend<TorusProblem, Points2, Points2>(prob, x, opts);
  s.seed = seed;
  PointConfiguration cfg(init.torus(), x);
  EnergyReport rep = prob.last;
  rep.metadata["optimizer"] = {{"seed", seed}, {"status", s.status}, {"iterations", s.iterations}};
  return {cfg, rep, s};
}

struct SphereRun {
  Points3 points;
  RunSummary summary;
};

SphereRun run_sphere(Points3 x, const OptimizerOptions& opts, std::uint64_t seed) {
  SphereProblem prob;
  RunSummary s = descend<SphereProblem, Points3, Points3>(prob, x, opts);
  s.seed = seed;
  return {std::move(x), std::move(s)};
}

}  // namespace

TorusResult minimize_torus(const PointConfiguration& init, const OptimizerOptions& opts) {
  opts.validate();
  TorusRun r = run_torus(init, opts, opts.rng_seed);
  return {r.config, r.report, r.summary, {r.summary}};
}

TorusResult minimize_torus(const Torus& T, std::size_t n, const OptimizerOptions& opts) {
  opts.validate();
  if (n < 1) throw DomainError("minimize_torus: n must be >= 1");
  auto runs = parallel_map(static_cast<std::size_t>(opts.restarts), [&](std::size_t r) {
    const std::uint64_t seed = opts.rng_seed + r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Points2 pts(n);
    for (auto& p : pts) {
      const double a = u(rng), b = u(rng);
      p = T.basis() * Eigen::Vector2d(a, b);
    }
    return std::optional<TorusRun>(run_torus(PointConfiguration(T, pts), opts, seed));
  });
  const std::size_t b = pick_best(runs);
  TorusResult out{runs[b]->config, runs[b]->report, runs[b]->summary, {}};
  for (const auto& r : runs) out.runs.push_back(r->summary);
  return out;
}

SphereConfiguration::SphereConfiguration(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
  for (const auto& p : points_)
    if (std::abs(p.norm() - 1.0) > 1e-12) throw DomainError("SphereConfiguration: points must be unit vectors");
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if ((points_[i] - points_[j]).norm() == 0.0) throw SingularityError("SphereConfiguration: coincident points");
}

double sphere_energy(const Points3& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d2 = (x[i] - x[j]).squaredNorm();
      if (d2 <= 1e-24) throw SingularityError("sphere_energy: coincident points");
      e -= std::log(d2);  // two ordered pairs, each -log|.| = -1/2 log d2
    }
  return e;
}

Points3 sphere_gradient(const Points3& x) {
  Points3 g(x.size(), Eigen::Vector3d::Zero());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const Eigen::Vector3d d = x[i] - x[j];
      const Eigen::Vector3d f = -2.0 * d / d.squaredNorm();
      g[i] += f;
      g[j] -= f;
    }
  return g;
}

Points3 sphere_tangent_gradient(const Points3& x) {
  Points3 g = sphere_gradient(x);
  for (std::size_t i = 0; i < x.size(); ++i) g[i] -= g[i].dot(x[i]) * x[i];
  return g;
}

SphereResult minimize_sphere(const SphereConfiguration& init, const OptimizerOptions& opts) {
  opts.validate();
  SphereRun r = run_sphere(init.points(), opts, opts.rng_seed);
  return {SphereConfiguration(r.points), r.summary.energy, r.summary, {r.summary}};
}

SphereResult minimize_sphere(std::size_t n, const OptimizerOptions& opts) {
  opts.validate();
  if (n < 2) throw DomainError("minimize_sphere: n must be >= 2");
  auto runs = parallel_map(static_cast<std::size_t>(opts.restarts), [&](std::size_t r) {
    const std::uint64_t seed = opts.rng_seed + r;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Points3 pts(n);
    for (auto& p : pts) {
      do {
        p = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      } while (p.norm() < 1e-8);
      p.normalize();
    }
    return std::optional<SphereRun>(run_sphere(std::move(pts), opts, seed));
  });
  const std::size_t b = pick_best(runs);
  SphereResult out{SphereConfiguration(runs[b]->points), runs[b]->summary.energy, runs[b]->summary, {}};
  for (const auto& r : runs) out.runs.push_back(r->summary);
  return out;
}

double c_log_estimate(std::size_t n, double energy) {
  const double m = static_cast<double>(n);
  return (energy - (0.5 - std::log(2.0)) * m * m + 0.5 * m * std::log(m)) / m;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iter,energy,grad_norm,step\n";
  for (const auto& r : trace) os << r.iter << ',' << r.energy << ',' << r.grad_norm << ',' << r.step << '\n';
  return os.str();
}

nlohmann::json to_json(const RunSummary& r, bool with_trace) {
  nlohmann::json j = {{"seed", r.seed},         {"energy", r.energy}, {"grad_norm", r.grad_norm},
                      {"iterations", r.iterations}, {"status", r.status}};
  if (with_trace) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : r.trace) rows.push_back({t.iter, t.energy, t.grad_norm, t.step});
    j["trace"] = rows;
  }
  return j;
}

nlohmann::json to_json(const SphereConfiguration& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points()) pts.push_back({p.x(), p.y(), p.z()});
  return {{"n", c.size()}, {"points", pts}};
}

}  // namespace jellium
