#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jellium/periodic.hpp"

namespace jellium {

/// Backtracking line search: the first iteration tries `initial`, later
/// ones a Barzilai-Borwein estimate from the last two gradients (or `grow`
/// times the last accepted step when `barzilai_borwein` is off or the
/// estimate is not positive). Trial steps are multiplied by `shrink` until
/// the Armijo condition E(x - t g) <= E(x) - c t |g|^2 holds.
struct StepRule {
  bool barzilai_borwein = true;
  double initial = 1e-2;
  double shrink = 0.5;
  double grow = 2.0;
  double max_step = 1.0;
  double armijo_c = 1e-4;
  int max_backtracks = 60;
};

struct OptimizerOptions {
  int max_iters = 5000;
  double grad_tol = 1e-7;
  StepRule step_rule;
  int restarts = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

/// Outcome of one descent run. `status` is "converged", "max_iters" or
/// "stalled" (the line search found no decrease; typical once the energy
/// change is below roundoff).
struct RunSummary {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  std::string status;
  std::vector<TraceRow> trace;
};

struct TorusResult {
  PointConfiguration config;
  EnergyReport report;
  RunSummary best;
  std::vector<RunSummary> runs;  // one per restart, in seed order
};

/// Descent from a given configuration; opts.restarts is ignored.
TorusResult minimize_torus(const PointConfiguration& init, const OptimizerOptions& opts = {});
/// Uniform random starts with seeds rng_seed, rng_seed + 1, ...; returns the
/// lowest energy (ties: lowest seed).
TorusResult minimize_torus(const Torus& T, std::size_t n, const OptimizerOptions& opts = {});

/// n unit vectors in R^3.
class SphereConfiguration {
 public:
  explicit SphereConfiguration(std::vector<Eigen::Vector3d> points);
  const std::vector<Eigen::Vector3d>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Eigen::Vector3d> points_;
};

/// E = -sum_{i != j} log|x_i - x_j| (ordered pairs).
double sphere_energy(const std::vector<Eigen::Vector3d>& x);
/// Euclidean gradient of sphere_energy.
std::vector<Eigen::Vector3d> sphere_gradient(const std::vector<Eigen::Vector3d>& x);
/// Gradient projected to the tangent planes.
std::vector<Eigen::Vector3d> sphere_tangent_gradient(const std::vector<Eigen::Vector3d>& x);

struct SphereResult {
  SphereConfiguration config;
  double energy = 0.0;
  RunSummary best;
  std::vector<RunSummary> runs;
};

SphereResult minimize_sphere(std::size_t n, const OptimizerOptions& opts = {});
SphereResult minimize_sphere(const SphereConfiguration& init, const OptimizerOptions& opts = {});

/// (E - (1/2 - log 2) n^2 + (1/2) n log n) / n.
double c_log_estimate(std::size_t n, double energy);

/// Rows "iter,energy,grad_norm,step".
std::string trace_csv(const std::vector<TraceRow>& trace);
nlohmann::json to_json(const RunSummary& r, bool with_trace = false);
nlohmann::json to_json(const SphereConfiguration& c);

}  // namespace jellium
