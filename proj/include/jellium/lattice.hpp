#pragma once

#include <Eigen/Dense>
#include <vector>

#include "json.hpp"

namespace jellium {

/// Full-rank lattice in R^d; the columns of `basis` are the generators.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis);

  int dimension() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double covolume() const { return covolume_; }
  bool is_normalized(double tol = 1e-12) const;

  Eigen::VectorXd point(const Eigen::VectorXi& coords) const { return basis_ * coords.cast<double>(); }

 private:
  Eigen::MatrixXd basis_;
  double covolume_;
};

Lattice make_triangular();
Lattice make_square(int d = 2);
Lattice make_integers_1d();

/// Rescales to covolume 1.
Lattice normalize(const Lattice& L);
Lattice scaled(const Lattice& L, double factor);
/// Basis inverse-transpose: {k : k.x in Z for all x in L}.
Lattice dual(const Lattice& L);

struct Shell {
  double radius = 0.0;
  std::vector<Eigen::VectorXd> points;
};

/// Nonzero lattice vectors with |x| <= r_max, sorted by norm (then by
/// coordinates) and grouped into shells of equal radius within 1e-9.
std::vector<Shell> shells(const Lattice& L, double r_max);

/// Same vectors as shells(), flattened. Cheaper when grouping is not needed.
std::vector<Eigen::VectorXd> lattice_vectors(const Lattice& L, double r_max);

/// Planar convex polygon with counter-clockwise vertices.
struct Cell {
  std::vector<Eigen::Vector2d> vertices;
  double area = 0.0;

  /// Strict interior test with a small tolerance band excluded.
  bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;
  double circumradius() const;
};

/// Voronoi cell of the origin (d = 2 only).
Cell wigner_seitz(const Lattice& L);

nlohmann::json to_json(const Lattice& L);
Lattice lattice_from_json(const nlohmann::json& j);

}  // namespace jellium
