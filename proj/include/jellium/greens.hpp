#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jellium/epstein.hpp"
#include "jellium/lattice.hpp"

namespace jellium {

/// Flat 2D torus R^2 / P for a period lattice P of any covolume.
class Torus {
 public:
  explicit Torus(Lattice periods);
  /// Square torus of side ell.
  static Torus square(double ell);
  /// Torus with periods m * L, which contains L as a sublattice of index m^2.
  static Torus commensurate(const Lattice& L, int m);

  const Lattice& periods() const { return periods_; }
  double area() const { return periods_.covolume(); }
  Eigen::Matrix2d basis() const { return periods_.basis(); }

  /// Representative of x in the fundamental parallelogram {B t : t in [0,1)^2}.
  Eigen::Vector2d reduce(const Eigen::Vector2d& x) const;
  /// Representative of x with basis coordinates in [-1/2, 1/2).
  Eigen::Vector2d centered(const Eigen::Vector2d& x) const;
  /// Shortest representative length of x mod P.
  double distance_to_lattice(const Eigen::Vector2d& x) const;

 private:
  Lattice periods_;
  Eigen::Matrix2d inverse_;
};

/// Points of the sublattice L inside the fundamental domain of
/// Torus::commensurate(L, m); m^2 points.
std::vector<Eigen::Vector2d> sublattice_points(const Lattice& L, int m);

/// Zero-mean periodic Green's function, -Laplacian G = 2 pi (sum_v delta_v - 1/|T|),
/// by Ewald splitting with Gaussian width alpha = split * pi / |T|.
double g_periodic(const Torus& T, const Eigen::Vector2d& x, const EwaldParams& p = {});
Eigen::Vector2d g_periodic_gradient(const Torus& T, const Eigen::Vector2d& x, const EwaldParams& p = {});

/// lim_{x -> 0} G_T(x) + log|x|.
double self_constant(const Torus& T, const EwaldParams& p = {});

/// self_constant of the unit square torus.
double madelung(const EwaldParams& p = {});

namespace detail {

/// Ewald ingredients shared by the Green's function and the periodic energy.
struct EwaldSetup {
  double alpha = 0.0;
  double real_cut = 0.0;                     // |x + v| cutoff
  std::vector<Eigen::Vector2d> real_vectors;  // period vectors with |v| <= real_cut + cell diameter
  std::vector<Eigen::Vector2d> wavevectors;   // nonzero k in 2 pi P*, |k| <= k_cut
  std::vector<double> k_weight;               // (2 pi / |T|) e^{-k^2 / 4 alpha} / k^2
};

EwaldSetup ewald_setup(const Torus& T, double alpha, double tol);

/// sum over v of E1(alpha |x + v|^2)/2 for x already centered; excludes the
/// v with x + v = 0 when `skip_origin`.
double real_space_sum(const EwaldSetup& e, const Eigen::Vector2d& x, bool skip_origin);
Eigen::Vector2d real_space_gradient(const EwaldSetup& e, const Eigen::Vector2d& x);

/// c_T evaluated with the given setup.
double self_constant(const EwaldSetup& e, double area);

}  // namespace detail

}  // namespace jellium
