#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jellium/geometry.hpp"
#include "jellium/lattice.hpp"
#include "jellium/report.hpp"

namespace jellium {

struct Disk {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
};

/// Union of interior-disjoint convex polygons and exact disks.
struct PolygonalDomain {
  std::vector<geom::Polygon> polygons;
  std::vector<Disk> disks;

  double total_area() const;
  void validate() const;
  PolygonalDomain translated(const Eigen::Vector2d& t) const;
  PolygonalDomain rotated(double angle) const;
};

/// Wigner-Seitz cells of L centered at the given lattice points.
PolygonalDomain cell_union(const Lattice& L, const std::vector<Eigen::Vector2d>& centers);

/// Triangular lattice points within hexagonal distance k of the origin;
/// 1 + 3k(k+1) points.
std::vector<Eigen::Vector2d> hex_patch_points(int k);
/// Union of the Wigner-Seitz cells of hex_patch_points(k).
PolygonalDomain hex_patch(int k);

struct SmearedCharge {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  double charge = 1.0;
};

/// Uniform charge of the given density on a domain.
struct RegionCharge {
  PolygonalDomain domain;
  double density = 1.0;
};

struct ChargeSystem {
  std::vector<SmearedCharge> disks;
  std::vector<RegionCharge> regions;

  double total_charge() const;
};

/// Integral of log|x - y| over y in Omega.
double background_potential(const PolygonalDomain& omega, const Eigen::Vector2d& x, double tol = 1e-8);
/// (1/2) double integral of log|x - y| over Omega x Omega.
double background_self(const PolygonalDomain& omega, double tol = 1e-6);
/// Integral of log|x - y| over the disk B(c, a), closed form.
double disk_log_potential(const Eigen::Vector2d& c, double a, const Eigen::Vector2d& x);

/// E = -sum_{j<k} log|x_j - x_k| + sum_j int_Omega log|x_j - y| dy
///     - (1/2) int int_{Omega x Omega} log|x - y|,
/// reported as pairwise + background + self_term.
EnergyReport jellium_energy(const PolygonalDomain& omega, const std::vector<Eigen::Vector2d>& points,
                            double tol = 1e-8);

/// D(f, g) = (1/2) int int -log|x - y| df(x) dg(y).
double d_interaction(const ChargeSystem& f, const ChargeSystem& g, double tol = 1e-10);
double d_self(const ChargeSystem& f, double tol = 1e-10);

/// Per-particle lower bound (1/2) log a - 1/8 - (pi/4) a^2.
double lieb_narnhofer_bound(double a);

struct OptimalBound {
  double a = 0.0;
  double bound = 0.0;
};
OptimalBound lieb_narnhofer_optimal();

struct LowerBoundDecomposition {
  double alpha = 0.0;        // D(sum of smeared charges - 1_Omega) >= 0
  double beta_exact = 0.0;   // sum_j (smeared - point) potential energy with the background
  double beta_bound = 0.0;   // -(pi/4) a^2 N
  double gamma = 0.0;        // (N/2)(log a - 1/4)
  double delta = 0.0;        // sum_{j<k} (point - smeared) pair energies >= 0
  double energy = 0.0;       // jellium_energy total
  double residual = 0.0;     // energy - (alpha + beta_exact + gamma + delta)
  double bound = 0.0;        // N * lieb_narnhofer_bound(a)
  bool balls_disjoint = false;
  bool balls_inside = false;
};

LowerBoundDecomposition lower_bound_decomposition(const PolygonalDomain& omega,
                                                  const std::vector<Eigen::Vector2d>& points, double a,
                                                  double tol = 1e-8);

nlohmann::json to_json(const PolygonalDomain& omega);
PolygonalDomain domain_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LowerBoundDecomposition& d);
/// Rows "term,value,tol".
std::string breakdown_csv(const EnergyReport& r, double tol);

}  // namespace jellium
