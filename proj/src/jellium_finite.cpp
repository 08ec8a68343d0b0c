#include "jellium/jellium_finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jellium/error.hpp"
#include "jellium/quadrature.hpp"

namespace jellium {

namespace {

constexpr double kPi = std::numbers::pi;
using geom::Segment;
using geom::Vec2;

const geom::RadialKernel& log_kernel() {
  static const geom::RadialKernel k = geom::RadialKernel::neg_log();
  return k;
}

double disk_area(double a) { return kPi * a * a; }

// Integral of -log|x - y| over the unit-density disk B(c, a).
double disk_neglog(const Vec2& c, double a, const Vec2& x) {
  const double r = (x - c).norm();
  if (r >= a) return -disk_area(a) * std::log(r);
  return -disk_area(a) * (std::log(a) + 0.5 * (r * r / (a * a) - 1.0));
}

// Edge-flux integral of g(r) = log(r/a) - (r^2/a^2 - 1)/2 (r < a, zero
// outside), the difference between the disk potential and the point
// potential per unit charge. Its flux density F(r) = r^{-2} int_0^r t g dt is
// 1/2 log(r/a) - r^2/(8a^2) inside and -a^2/(8r^2) outside.
double disk_correction_flux(double h, double t0, double t1, double a) {
  if (h == 0.0 || t0 == t1) return 0.0;
  const double ah = std::abs(h), h2 = h * h;
  auto inside = [&](double t) {  // antiderivative of F inside
    const double l = 0.5 * t * std::log(h2 + t * t) - t + ah * std::atan(t / ah);  // int 1/2 log(h^2+t^2)
    return 0.5 * (l - t * std::log(a)) - (h2 * t + t * t * t / 3.0) / (8.0 * a * a);
  };
  auto outside = [&](double t) { return -a * a / (8.0 * ah) * std::atan(t / ah); };
  double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double sign = t1 < t0 ? -1.0 : 1.0;
  double sum = 0.0;
  if (ah >= a) {
    sum = outside(hi) - outside(lo);
  } else {
    const double w = std::sqrt(a * a - h2);
    // pieces: (lo, -w) outside, (-w, w) inside, (w, hi) outside
    const double p0 = std::min(hi, -w), p1 = std::max(lo, -w), p2 = std::min(hi, w), p3 = std::max(lo, w);
    if (lo < p0) sum += outside(p0) - outside(lo);
    if (p1 < p2) sum += inside(p2) - inside(p1);
    if (p3 < hi) sum += outside(hi) - outside(p3);
  }
  return sign * h * sum;
}

double boundary_correction(const std::vector<Segment>& boundary, const Vec2& c, double a) {
  double sum = 0.0;
  for (const auto& e : boundary) {
    const double len = e.length();
    if (len == 0.0) continue;
    const Vec2 dir = (e.b - e.a) / len;
    const Vec2 n(dir.y(), -dir.x());
    const double h = (e.a - c).dot(n);
    const double t0 = (e.a - c).dot(dir);
    sum += disk_correction_flux(h, t0, t0 + len, a);
  }
  return sum;
}

// Integral over y in B(c2, a2) of g1(|y - c1|), with g1 the correction of
// disk 1; one-dimensional in r = |y - c1| with arc lengths L(r).
double disk_overlap_correction(const Vec2& c1, double a1, const Vec2& c2, double a2, double tol) {
  const double d = (c1 - c2).norm();
  auto g = [&](double r) { return std::log(r / a1) - 0.5 * (r * r / (a1 * a1) - 1.0); };
  auto arc = [&](double r) {
    if (r + d <= a2) return 2.0 * kPi * r;
    if (r >= d + a2 || r <= d - a2) return 0.0;
    const double c = std::clamp((r * r + d * d - a2 * a2) / (2.0 * r * d), -1.0, 1.0);
    return 2.0 * r * std::acos(c);
  };
  std::vector<double> cuts = {0.0, a1};
  for (double b : {std::abs(d - a2), d + a2})
    if (b > 0.0 && b < a1) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    sum += quad::tanh_sinh([&](double r, double) { return r > 0.0 ? g(r) * arc(r) : 0.0; }, cuts[i], cuts[i + 1],
                           std::min(1e-12, tol));
  }
  return sum;
}

// Unit-density disk against unit-density disk: integral of -log|x - y|.
double disk_disk(const Disk& p, const Disk& q, double tol) {
  const double d = (p.center - q.center).norm();
  const double A1 = disk_area(p.radius), A2 = disk_area(q.radius);
  if (d >= p.radius + q.radius) return -A1 * A2 * std::log(d);
  if (d == 0.0 && p.radius == q.radius) return A1 * A1 * (0.25 - std::log(p.radius));
  // potential of p integrated over q: point part plus the correction of p
  return A1 * (disk_neglog(q.center, q.radius, p.center) +
               disk_overlap_correction(p.center, p.radius, q.center, q.radius, tol));
}

struct PreparedDomain {
  std::vector<Segment> boundary;  // polygons only
  std::vector<Disk> disks;
};

PreparedDomain prepare(const PolygonalDomain& omega) {
  omega.validate();
  return {geom::union_boundary(omega.polygons), omega.disks};
}

// Integral of -log|x - y| over the domain.
double domain_neglog(const PreparedDomain& P, const Vec2& x) {
  double sum = geom::region_potential(P.boundary, x, log_kernel());
  for (const auto& d : P.disks) sum += disk_neglog(d.center, d.radius, x);
  return sum;
}

// Unit-density disk against the domain.
double disk_domain(const Disk& disk, const PreparedDomain& P, double tol) {
  double sum = disk_area(disk.radius) * (geom::region_potential(P.boundary, disk.center, log_kernel()) +
                                         boundary_correction(P.boundary, disk.center, disk.radius));
  for (const auto& d : P.disks) sum += disk_disk(disk, d, tol);
  return sum;
}

double domain_domain(const PreparedDomain& A, const PreparedDomain& B, double tol) {
  double sum = geom::region_pair_integral(A.boundary, B.boundary, log_kernel());
  for (const auto& d : A.disks) sum += disk_domain(d, B, tol);
  const PreparedDomain polys_a{A.boundary, {}};
  for (const auto& d : B.disks) sum += disk_domain(d, polys_a, tol);
  return sum;
}

double distance_to_boundary(const std::vector<Segment>& boundary, const Vec2& x) {
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& e : boundary) {
    const Vec2 dv = e.b - e.a;
    const double t = std::clamp((x - e.a).dot(dv) / dv.squaredNorm(), 0.0, 1.0);
    dist = std::min(dist, (x - (e.a + t * dv)).norm());
  }
  return dist;
}

}  // namespace

double PolygonalDomain::total_area() const {
  double a = 0.0;
  for (const auto& p : polygons) a += p.area();
  for (const auto& d : disks) a += disk_area(d.radius);
  return a;
}

void PolygonalDomain::validate() const {
  for (const auto& p : polygons) {
    if (p.vertices.size() < 3) throw DomainError("PolygonalDomain: polygon needs at least three vertices");
    if (!(p.area() > 0.0)) throw DomainError("PolygonalDomain: polygons must be counter-clockwise with positive area");
  }
  for (const auto& d : disks)
    if (!(d.radius > 0.0)) throw DomainError("PolygonalDomain: disk radius must be positive");
}

PolygonalDomain PolygonalDomain::translated(const Eigen::Vector2d& t) const {
  PolygonalDomain out = *this;
  for (auto& p : out.polygons) p = p.translated(t);
  for (auto& d : out.disks) d.center += t;
  return out;
}

PolygonalDomain PolygonalDomain::rotated(double angle) const {
  const Eigen::Matrix2d R = Eigen::Rotation2Dd(angle).toRotationMatrix();
  PolygonalDomain out = *this;
  for (auto& p : out.polygons)
    for (auto& v : p.vertices) v = R * v;
  for (auto& d : out.disks) d.center = R * d.center;
  return out;
}

PolygonalDomain cell_union(const Lattice& L, const std::vector<Eigen::Vector2d>& centers) {
  const Cell cell = wigner_seitz(L);
  PolygonalDomain out;
  for (const auto& c : centers) out.polygons.push_back(geom::Polygon{cell.vertices}.translated(c));
  return out;
}

std::vector<Eigen::Vector2d> hex_patch_points(int k) {
  if (k < 0) throw DomainError("hex_patch: k must be non-negative");
  const Lattice T = make_triangular();
  std::vector<Eigen::Vector2d> pts;
  for (int n = -k; n <= k; ++n)
    for (int m = -k; m <= k; ++m)
      if (std::abs(n + m) <= k) pts.emplace_back(T.basis() * Eigen::Vector2d(n, m));
  return pts;
}

PolygonalDomain hex_patch(int k) { return cell_union(make_triangular(), hex_patch_points(k)); }

double ChargeSystem::total_charge() const {
  double q = 0.0;
  for (const auto& d : disks) q += d.charge;
  for (const auto& r : regions) q += r.density * r.domain.total_area();
  return q;
}

double disk_log_potential(const Eigen::Vector2d& c, double a, const Eigen::Vector2d& x) {
  if (!(a > 0.0)) throw DomainError("disk_log_potential: radius must be positive");
  return -disk_neglog(c, a, x);
}

double background_potential(const PolygonalDomain& omega, const Eigen::Vector2d& x, double tol) {
  if (!(tol > 0.0)) throw DomainError("background_potential: tol must be positive");
  return -domain_neglog(prepare(omega), x);
}

double background_self(const PolygonalDomain& omega, double tol) {
  if (!(tol > 0.0)) throw DomainError("background_self: tol must be positive");
  const PreparedDomain P = prepare(omega);
  return -0.5 * domain_domain(P, P, tol);
}

EnergyReport jellium_energy(const PolygonalDomain& omega, const std::vector<Eigen::Vector2d>& points, double tol) {
  if (!(tol > 0.0)) throw DomainError("jellium_energy: tol must be positive");
  const PreparedDomain P = prepare(omega);
  EnergyReport r;
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t k = j + 1; k < points.size(); ++k) {
      const double d = (points[j] - points[k]).norm();
      if (d <= 1e-12) throw SingularityError("jellium_energy: coincident points");
      r.pairwise -= std::log(d);
    }
    r.background -= domain_neglog(P, points[j]);
  }
  r.self_term = 0.5 * domain_domain(P, P, tol);
  r.total = r.pairwise + r.background + r.self_term;
  const double area = omega.total_area();
  r.metadata = {{"backend", "boundary-integral"},
                {"n", points.size()},
                {"area", area},
                {"tol", tol},
                {"neutral", std::abs(area - double(points.size())) <= 1e-9 * std::max(1.0, area)}};
  if (!r.metadata["neutral"].get<bool>()) r.metadata["warning"] = "domain area differs from the particle number";
  return r;
}

namespace {

struct Piece {
  bool is_disk;
  Disk disk;
  double weight;  // density
  const PolygonalDomain* domain;
};

std::vector<Piece> pieces_of(const ChargeSystem& f) {
  std::vector<Piece> out;
  for (const auto& d : f.disks) {
    if (!(d.radius > 0.0)) throw DomainError("SmearedCharge: radius must be positive");
    out.push_back({true, {d.center, d.radius}, d.charge / disk_area(d.radius), nullptr});
  }
  for (const auto& r : f.regions) out.push_back({false, {}, r.density, &r.domain});
  return out;
}

}  // namespace

double d_interaction(const ChargeSystem& f, const ChargeSystem& g, double tol) {
  if (!(tol > 0.0)) throw DomainError("d_interaction: tol must be positive");
  const auto pf = pieces_of(f), pg = pieces_of(g);
  std::vector<PreparedDomain> df(pf.size()), dg(pg.size());
  for (std::size_t i = 0; i < pf.size(); ++i)
    if (!pf[i].is_disk) df[i] = prepare(*pf[i].domain);
  for (std::size_t i = 0; i < pg.size(); ++i)
    if (!pg[i].is_disk) dg[i] = prepare(*pg[i].domain);
  double sum = 0.0;
  for (std::size_t i = 0; i < pf.size(); ++i)
    for (std::size_t j = 0; j < pg.size(); ++j) {
      const Piece &p = pf[i], &q = pg[j];
      double v;
      if (p.is_disk && q.is_disk) v = disk_disk(p.disk, q.disk, tol);
      else if (p.is_disk) v = disk_domain(p.disk, dg[j], tol);
      else if (q.is_disk) v = disk_domain(q.disk, df[i], tol);
      else v = domain_domain(df[i], dg[j], tol);
      sum += p.weight * q.weight * v;
    }
  return 0.5 * sum;
}

double d_self(const ChargeSystem& f, double tol) { return d_interaction(f, f, tol); }

double lieb_narnhofer_bound(double a) {
  if (!(a > 0.0)) throw DomainError("lieb_narnhofer_bound: a must be positive");
  return 0.5 * std::log(a) - 0.125 - 0.25 * kPi * a * a;
}

OptimalBound lieb_narnhofer_optimal() {
  // d/da: 1/(2a) - (pi/2) a = 0
  const double a = 1.0 / std::sqrt(kPi);
  return {a, lieb_narnhofer_bound(a)};
}

LowerBoundDecomposition lower_bound_decomposition(const PolygonalDomain& omega,
                                                  const std::vector<Eigen::Vector2d>& points, double a,
                                                  double tol) {
  if (!(a > 0.0)) throw DomainError("lower_bound_decomposition: a must be positive");
  const PreparedDomain P = prepare(omega);
  const std::size_t N = points.size();
  LowerBoundDecomposition out;
  out.energy = jellium_energy(omega, points, tol).total;

  ChargeSystem f;
  for (const auto& x : points) f.disks.push_back({x, a, 1.0});
  f.regions.push_back({omega, -1.0});
  out.alpha = d_self(f, tol);

  // beta: smeared minus point potential energy against the background
  for (const auto& x : points) {
    const double point = domain_neglog(P, x);
    const double smeared = disk_domain(Disk{x, a}, P, tol) / disk_area(a);
    out.beta_exact += smeared - point;
  }
  out.beta_bound = -0.25 * kPi * a * a * N;
  out.gamma = 0.5 * N * (std::log(a) - 0.25);

  out.balls_disjoint = true;
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) {
      const double d = (points[j] - points[k]).norm();
      if (d < 2.0 * a) {
        out.balls_disjoint = false;
        const double smeared = disk_disk(Disk{points[j], a}, Disk{points[k], a}, tol) / (disk_area(a) * disk_area(a));
        out.delta += -std::log(d) - smeared;
      }
    }
  out.balls_inside = true;
  for (const auto& x : points) {
    bool inside = false;
    for (const auto& poly : omega.polygons)
      inside = inside || (poly.contains(x) && distance_to_boundary(P.boundary, x) >= a);
    for (const auto& d : omega.disks) inside = inside || (x - d.center).norm() + a <= d.radius;
    out.balls_inside = out.balls_inside && inside;
  }
  out.residual = out.energy - (out.alpha + out.beta_exact + out.gamma + out.delta);
  out.bound = N * lieb_narnhofer_bound(a);
  return out;
}

nlohmann::json to_json(const PolygonalDomain& omega) {
  nlohmann::json polys = nlohmann::json::array();
  for (const auto& p : omega.polygons) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : p.vertices) verts.push_back({v.x(), v.y()});
    polys.push_back(verts);
  }
  nlohmann::json disks = nlohmann::json::array();
  for (const auto& d : omega.disks) disks.push_back({{"center", {d.center.x(), d.center.y()}}, {"radius", d.radius}});
  return {{"polygons", polys}, {"disks", disks}, {"total_area", omega.total_area()}};
}

PolygonalDomain domain_from_json(const nlohmann::json& j) {
  PolygonalDomain out;
  for (const auto& verts : j.at("polygons")) {
    geom::Polygon p;
    for (const auto& v : verts) p.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    out.polygons.push_back(p);
  }
  if (j.contains("disks"))
    for (const auto& d : j.at("disks"))
      out.disks.push_back({{d.at("center").at(0).get<double>(), d.at("center").at(1).get<double>()},
                           d.at("radius").get<double>()});
  out.validate();
  return out;
}

nlohmann::json to_json(const LowerBoundDecomposition& d) {
  return {{"alpha", d.alpha},     {"beta_exact", d.beta_exact}, {"beta_bound", d.beta_bound},
          {"gamma", d.gamma},     {"delta", d.delta},           {"energy", d.energy},
          {"residual", d.residual}, {"bound", d.bound},         {"balls_disjoint", d.balls_disjoint},
          {"balls_inside", d.balls_inside}};
}

std::string breakdown_csv(const EnergyReport& r, double tol) {
  std::ostringstream os;
  os.precision(17);
  os << "term,value,tol\n";
  os << "pairwise," << r.pairwise << ",0\n";
  os << "background," << r.background << ',' << tol << '\n';
  os << "self_term," << r.self_term << ',' << tol << '\n';
  os << "total," << r.total << ',' << tol << '\n';
  return os.str();
}

}  // namespace jellium
