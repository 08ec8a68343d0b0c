#pragma once

// Planar polygons and boundary-integral evaluation of radial-kernel
// potentials. Both the single integral over a polygon and the double integral
// over a pair of polygons reduce to integrals over boundary edges, so no area
// quadrature is ever needed.

#include <Eigen/Dense>
#include <vector>

namespace jellium::geom {

using Vec2 = Eigen::Vector2d;

struct Segment {
  Vec2 a, b;
  double length() const { return (b - a).norm(); }
  /// Outward normal for counter-clockwise traversal of the enclosing region.
  Vec2 normal() const;
};

struct Polygon {
  std::vector<Vec2> vertices;  // counter-clockwise

  double area() const;
  Vec2 centroid() const;
  /// Second moment about the origin, the integral of y y^T over the polygon.
  Eigen::Matrix2d second_moment() const;
  std::vector<Segment> edges() const;
  Polygon translated(const Vec2& t) const;
  bool contains(const Vec2& p) const;  // closed, convex polygons only
};

/// Boundary of a union of interior-disjoint polygons: shared edges traversed
/// in opposite directions cancel. Partially overlapping edges are not split.
std::vector<Segment> union_boundary(const std::vector<Polygon>& polys, double tol = 1e-9);

/// Radial kernel V(r) = r^{-s} (power) or -log r (log), with the radial
/// antiderivatives used by the divergence theorem.
class RadialKernel {
 public:
  static RadialKernel power(double s);  // 0 <= s < 2
  static RadialKernel neg_log();

  bool is_log() const { return log_; }
  double exponent() const { return s_; }
  double value(double r) const;
  /// Integral of the edge flux density h * F(sqrt(h^2 + t^2)) over t in [t0, t1].
  double edge_flux(double h, double t0, double t1) const;
  /// phi(r) with Laplacian phi = V and zero flux at the origin.
  double phi(double r) const;
  /// Even second antiderivative of phi(|u|), vanishing at u = 0.
  double phi_antideriv2(double u) const;

 private:
  RadialKernel(bool log, double s) : log_(log), s_(s) {}
  bool log_;
  double s_;
};

/// Integral over the region bounded by `boundary` of V(|x - y|) dy.
double region_potential(const std::vector<Segment>& boundary, const Vec2& x, const RadialKernel& k);

/// Integral over (y, w) in A x B of V(|y - w|). A and B may coincide or
/// touch along edges and at vertices but must be interior-disjoint or equal.
double region_pair_integral(const std::vector<Segment>& A, const std::vector<Segment>& B, const RadialKernel& k);

}  // namespace jellium::geom
