#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jellium/greens.hpp"
#include "jellium/report.hpp"

namespace jellium {

/// n points on a torus, stored reduced to the fundamental parallelogram.
class PointConfiguration {
 public:
  PointConfiguration(Torus torus, std::vector<Eigen::Vector2d> points);

  const Torus& torus() const { return torus_; }
  const std::vector<Eigen::Vector2d>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double density() const { return points_.size() / torus_.area(); }
  /// Smallest pairwise distance on the torus (infinity for n = 1).
  double min_separation() const;

  PointConfiguration translated(const Eigen::Vector2d& t) const;

 private:
  Torus torus_;
  std::vector<Eigen::Vector2d> points_;
};

/// The perfect sublattice configuration of L on Torus::commensurate(L, m).
PointConfiguration sublattice_configuration(const Lattice& L, int m);

/// E = sum_{j<k} G_T(x_j - x_k) + (n/2) c_T. `pairwise` holds the first sum
/// and `self_term` the second.
EnergyReport e_per(const PointConfiguration& cfg, const EwaldParams& p = {});
std::vector<Eigen::Vector2d> e_per_gradient(const PointConfiguration& cfg, const EwaldParams& p = {});

/// Energy and gradient from one shared Ewald setup; fills gradient_norm.
EnergyReport e_per_with_gradient(const PointConfiguration& cfg, std::vector<Eigen::Vector2d>& grad,
                                 const EwaldParams& p = {});

nlohmann::json to_json(const Torus& T);
nlohmann::json to_json(const PointConfiguration& cfg);
PointConfiguration configuration_from_json(const nlohmann::json& j);
/// Rows "index,gx,gy".
std::string gradient_csv(const std::vector<Eigen::Vector2d>& grad);

}  // namespace jellium
