#include "jellium/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "jellium/error.hpp"
#include "jellium/quadrature.hpp"

namespace jellium::geom {

namespace {

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

double point_segment_distance(const Vec2& p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - s.a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (s.a + t * d)).norm();
}

double segment_distance(const Segment& u, const Segment& v) {
  return std::min({point_segment_distance(u.a, v), point_segment_distance(u.b, v),
                   point_segment_distance(v.a, u), point_segment_distance(v.b, u)});
}

double tensor_gauss(const Segment& u, const Segment& v, const RadialKernel& k, int n) {
  const quad::GaussRule& rule = quad::gauss_legendre(n);
  const Vec2 mu = 0.5 * (u.a + u.b), hu = 0.5 * (u.b - u.a);
  const Vec2 mv = 0.5 * (v.a + v.b), hv = 0.5 * (v.b - v.a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 p = mu + rule.nodes[i] * hu;
    double inner = 0.0;
    for (int j = 0; j < n; ++j) inner += rule.weights[j] * k.phi((p - mv - rule.nodes[j] * hv).norm());
    sum += rule.weights[i] * inner;
  }
  return sum * hu.norm() * hv.norm();
}

// Integral of phi(|p - q|) over p in u, q in v (arc-length measure). Pairs
// closer than their size are split so each leaf sees a smooth integrand.
double segment_pair_phi(const Segment& u, const Segment& v, const RadialKernel& k, int depth) {
  const double lu = u.length(), lv = v.length();
  const double size = std::max(lu, lv);
  const double dist = segment_distance(u, v);
  if (dist >= 4.0 * size) return tensor_gauss(u, v, k, 10);
  if (dist >= size) return tensor_gauss(u, v, k, 16);
  if (dist >= 0.5 * size) return tensor_gauss(u, v, k, 24);
  if (depth > 60) return lu * lv * k.phi(dist);  // contribution is O(size^{4-s})
  auto halves = [](const Segment& s) {
    const Vec2 m = 0.5 * (s.a + s.b);
    return std::pair{Segment{s.a, m}, Segment{m, s.b}};
  };
  double sum = 0.0;
  const bool split_u = lu > 0.5 * size, split_v = lv > 0.5 * size;
  if (split_u && split_v) {
    auto [u0, u1] = halves(u);
    auto [v0, v1] = halves(v);
    for (const auto* a : {&u0, &u1})
      for (const auto* b : {&v0, &v1}) sum += segment_pair_phi(*a, *b, k, depth + 1);
  } else if (split_u) {
    auto [u0, u1] = halves(u);
    sum = segment_pair_phi(u0, v, k, depth + 1) + segment_pair_phi(u1, v, k, depth + 1);
  } else {
    auto [v0, v1] = halves(v);
    sum = segment_pair_phi(u, v0, k, depth + 1) + segment_pair_phi(u, v1, k, depth + 1);
  }
  return sum;
}

// Collinear pair: exact via the second antiderivative of phi along the line.
double collinear_pair_phi(const Segment& u, const Segment& v, const RadialKernel& k) {
  const Vec2 dir = (u.b - u.a).normalized();
  const double a = 0.0, b = u.length();
  double c = (v.a - u.a).dot(dir), d = (v.b - u.a).dot(dir);
  if (c > d) std::swap(c, d);
  auto P = [&](double x) { return k.phi_antideriv2(x); };
  return P(b - c) - P(b - d) - P(a - c) + P(a - d);
}

}  // namespace

Vec2 Segment::normal() const {
  const Vec2 d = (b - a).normalized();
  return {d.y(), -d.x()};
}

double Polygon::area() const {
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) s += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  return 0.5 * s;
}

Vec2 Polygon::centroid() const {
  Vec2 c = Vec2::Zero();
  double a = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % vertices.size()];
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  return c / (3.0 * a);
}

Eigen::Matrix2d Polygon::second_moment() const {
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % vertices.size()];
    const double w = cross(p, q);
    xx += w * (p.x() * p.x() + p.x() * q.x() + q.x() * q.x());
    yy += w * (p.y() * p.y() + p.y() * q.y() + q.y() * q.y());
    xy += w * (2.0 * p.x() * p.y() + p.x() * q.y() + q.x() * p.y() + 2.0 * q.x() * q.y());
  }
  Eigen::Matrix2d m;
  m << xx / 12.0, xy / 24.0, xy / 24.0, yy / 12.0;
  return m;
}

std::vector<Segment> Polygon::edges() const {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) out.push_back({vertices[i], vertices[(i + 1) % vertices.size()]});
  return out;
}

Polygon Polygon::translated(const Vec2& t) const {
  Polygon p = *this;
  for (auto& v : p.vertices) v += t;
  return p;
}

bool Polygon::contains(const Vec2& p) const {
  for (const auto& e : edges())
    if (cross(e.b - e.a, p - e.a) < 0.0) return false;
  return true;
}

std::vector<Segment> union_boundary(const std::vector<Polygon>& polys, double tol) {
  std::vector<Segment> all;
  for (const auto& p : polys)
    for (const auto& e : p.edges()) all.push_back(e);
  std::vector<bool> dead(all.size(), false);
  // Sort by midpoint x so candidate twins are adjacent in a sweep window.
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto mid_x = [&](std::size_t i) { return 0.5 * (all[i].a.x() + all[i].b.x()); };
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return mid_x(i) < mid_x(j); });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    if (dead[i]) continue;
    for (std::size_t oj = oi + 1; oj < order.size() && mid_x(order[oj]) - mid_x(i) <= tol; ++oj) {
      const std::size_t j = order[oj];
      if (dead[j]) continue;
      if ((all[i].a - all[j].b).norm() <= tol && (all[i].b - all[j].a).norm() <= tol) {
        dead[i] = dead[j] = true;
        break;
      }
    }
  }
  std::vector<Segment> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!dead[i]) out.push_back(all[i]);
  return out;
}

RadialKernel RadialKernel::power(double s) {
  if (!(s >= 0.0 && s < 2.0)) throw RangeError("RadialKernel: power kernel needs 0 <= s < 2");
  return RadialKernel(false, s);
}

RadialKernel RadialKernel::neg_log() { return RadialKernel(true, 0.0); }

double RadialKernel::value(double r) const { return log_ ? -std::log(r) : std::pow(r, -s_); }

double RadialKernel::edge_flux(double h, double t0, double t1) const {
  if (h == 0.0 || t0 == t1) return 0.0;
  const double ah = std::abs(h);
  if (log_) {
    // F(r) = -log(r)/2 + 1/4
    auto prim = [&](double t) {
      return -0.5 * (0.5 * t * std::log(h * h + t * t) - t + ah * std::atan(t / ah)) + 0.25 * t;
    };
    return h * (prim(t1) - prim(t0));
  }
  if (s_ == 0.0) return h * 0.5 * (t1 - t0);
  // F(r) = r^{-s}/(2-s); singularities of the integrand sit at t = +-i|h|.
  auto f = [&](double t) { return std::pow(h * h + t * t, -0.5 * s_); };
  auto one_side = [&](double lo, double hi) {  // 0 <= lo < hi
    return quad::graded(f, lo, hi, ah, 16);
  };
  const double sign = t1 < t0 ? -1.0 : 1.0;
  if (t1 < t0) std::swap(t0, t1);
  double sum;
  if (t0 >= 0.0) sum = one_side(t0, t1);
  else if (t1 <= 0.0) sum = one_side(-t1, -t0);  // integrand is even in t
  else sum = one_side(0.0, t1) + one_side(0.0, -t0);
  return sign * h * sum / (2.0 - s_);
}

double RadialKernel::phi(double r) const {
  if (r == 0.0) return 0.0;
  if (log_) return -0.25 * r * r * (std::log(r) - 1.0);
  const double p = 2.0 - s_;
  return std::pow(r, p) / (p * p);
}

double RadialKernel::phi_antideriv2(double u) const {
  const double a = std::abs(u);
  if (a == 0.0) return 0.0;
  const double a4 = a * a * a * a;
  if (log_) return -a4 * std::log(a) / 48.0 + 19.0 * a4 / 576.0;
  const double p = 2.0 - s_;
  return std::pow(a, 4.0 - s_) / (p * p * (3.0 - s_) * (4.0 - s_));
}

double region_potential(const std::vector<Segment>& boundary, const Vec2& x, const RadialKernel& k) {
  double sum = 0.0;
  for (const auto& e : boundary) {
    const double len = e.length();
    if (len == 0.0) continue;
    const Vec2 dir = (e.b - e.a) / len;
    const Vec2 n(dir.y(), -dir.x());
    const double h = (e.a - x).dot(n);
    const double t0 = (e.a - x).dot(dir);
    sum += k.edge_flux(h, t0, t0 + len);
  }
  return sum;
}

double region_pair_integral(const std::vector<Segment>& A, const std::vector<Segment>& B, const RadialKernel& k) {
  double sum = 0.0;
  for (const auto& u : A) {
    const double lu = u.length();
    if (lu == 0.0) continue;
    const Vec2 nu = u.normal();
    const Vec2 du = (u.b - u.a) / lu;
    for (const auto& v : B) {
      const double lv = v.length();
      if (lv == 0.0) continue;
      const double dot = nu.dot(v.normal());
      if (dot == 0.0) continue;
      const double scale = std::max(lu, lv);
      const bool near = segment_distance(u, v) < scale;
      const bool collinear = std::abs(cross(du, v.b - v.a)) <= 1e-12 * lv &&
                             std::abs(cross(du, v.a - u.a)) <= 1e-12 * scale;
      const double val = (near && collinear) ? collinear_pair_phi(u, v, k) : segment_pair_phi(u, v, k, 0);
      sum -= dot * val;
    }
  }
  return sum;
}

}  // namespace jellium::geom
