#include "jellium/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jellium/error.hpp"

namespace jellium {

Lattice::Lattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() < 1)
    throw DomainError("Lattice: basis must be a non-empty square matrix");
  if (!basis_.allFinite()) throw DomainError("Lattice: basis has non-finite entries");
  covolume_ = std::abs(basis_.determinant());
  const double scale = basis_.colwise().norm().prod();
  if (!(covolume_ > 1e-12 * scale)) throw DomainError("Lattice: basis is singular");
}

bool Lattice::is_normalized(double tol) const { return std::abs(covolume_ - 1.0) <= tol; }

Lattice make_triangular() {
  const double c = std::sqrt(2.0 / std::sqrt(3.0));
  Eigen::Matrix2d b;
  b << c, 0.5 * c,
       0.0, 0.5 * std::sqrt(3.0) * c;
  return Lattice(b);
}

Lattice make_square(int d) {
  if (d < 1) throw DomainError("make_square: dimension must be >= 1");
  return Lattice(Eigen::MatrixXd::Identity(d, d));
}

Lattice make_integers_1d() { return make_square(1); }

Lattice scaled(const Lattice& L, double factor) {
  if (!(factor > 0.0)) throw DomainError("scaled: factor must be positive");
  return Lattice(L.basis() * factor);
}

Lattice normalize(const Lattice& L) {
  return scaled(L, std::pow(L.covolume(), -1.0 / L.dimension()));
}

Lattice dual(const Lattice& L) { return Lattice(L.basis().inverse().transpose()); }

std::vector<Eigen::VectorXd> lattice_vectors(const Lattice& L, double r_max) {
  if (!(r_max > 0.0)) throw DomainError("shells: r_max must be positive");
  const int d = L.dimension();
  const Eigen::MatrixXd inv = L.basis().inverse();
  // |n_i| = |row_i(B^{-1}) x| <= |row_i| r_max
  std::vector<long> bound(d);
  for (int i = 0; i < d; ++i) bound[i] = static_cast<long>(std::floor(inv.row(i).norm() * r_max + 1e-9));

  const double r2 = r_max * r_max * (1.0 + 1e-12);
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd coords(d);
  std::function<void(int)> walk = [&](int i) {
    if (i == d) {
      if (coords.isZero()) return;
      Eigen::VectorXd x = L.basis() * coords;
      if (x.squaredNorm() <= r2) out.push_back(std::move(x));
      return;
    }
    for (long n = -bound[i]; n <= bound[i]; ++n) {
      coords[i] = static_cast<double>(n);
      walk(i + 1);
    }
  };
  walk(0);
  return out;
}

std::vector<Shell> shells(const Lattice& L, double r_max) {
  auto pts = lattice_vectors(L, r_max);
  std::vector<std::pair<double, Eigen::VectorXd>> keyed;
  keyed.reserve(pts.size());
  for (auto& p : pts) keyed.emplace_back(p.norm(), std::move(p));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return std::lexicographical_compare(a.second.data(), a.second.data() + a.second.size(),
                                        b.second.data(), b.second.data() + b.second.size());
  });
  std::vector<Shell> out;
  for (auto& [r, p] : keyed) {
    if (out.empty() || r - out.back().radius > 1e-9) out.push_back(Shell{r, {}});
    out.back().points.push_back(std::move(p));
  }
  // Within a shell the sort can interleave points whose norms differ by
  // rounding only; order them by coordinates so output is reproducible.
  for (auto& s : out) {
    std::sort(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) {
      return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
  }
  return out;
}

namespace {

double polygon_area(const std::vector<Eigen::Vector2d>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

// Sutherland–Hodgman clip against {x : x.n <= h}.
std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& n, double h) {
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const double fp = p.dot(n) - h, fq = q.dot(n) - h;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

}  // namespace

bool Cell::contains(const Eigen::Vector2d& p, double tol) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Eigen::Vector2d e = vertices[(i + 1) % vertices.size()] - vertices[i];
    const Eigen::Vector2d r = p - vertices[i];
    if (e.x() * r.y() - e.y() * r.x() <= tol * e.norm()) return false;
  }
  return true;
}

double Cell::circumradius() const {
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, v.norm());
  return r;
}

Cell wigner_seitz(const Lattice& L) {
  if (L.dimension() != 2) throw UnsupportedError("wigner_seitz: only d = 2 is supported");
  // Start from the first two shells. A neighbor v can only cut the cell if
  // |v| <= 2 R with R the current circumradius, so widen until that radius is
  // covered (matters for elongated bases).
  const auto sh = shells(L, 4.0 * L.basis().colwise().norm().maxCoeff());
  double radius = sh.size() > 1 ? sh[1].radius : sh[0].radius;
  Cell cell;
  for (;;) {
    const double box = 2.0 * L.basis().colwise().norm().sum();
    std::vector<Eigen::Vector2d> poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
    for (const auto& v : lattice_vectors(L, radius)) poly = clip(poly, v, 0.5 * v.squaredNorm());
    cell.vertices = std::move(poly);
    const double needed = 2.0 * cell.circumradius();
    if (needed <= radius * (1.0 + 1e-12)) break;
    radius = needed;
  }
  // Drop near-duplicate vertices produced when a clip line passes through a vertex.
  std::vector<Eigen::Vector2d> clean;
  for (const auto& v : cell.vertices)
    if (clean.empty() || (v - clean.back()).norm() > 1e-12) clean.push_back(v);
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-12) clean.pop_back();
  cell.vertices = std::move(clean);
  cell.area = polygon_area(cell.vertices);
  return cell;
}

nlohmann::json to_json(const Lattice& L) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < L.dimension(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < L.dimension(); ++j) row.push_back(L.basis()(i, j));
    rows.push_back(row);
  }
  return {{"dimension", L.dimension()}, {"basis", rows}, {"covolume", L.covolume()}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
  const int d = j.at("dimension").get<int>();
  const auto& rows = j.at("basis");
  if (d < 1 || static_cast<int>(rows.size()) != d) throw DomainError("lattice_from_json: basis shape mismatch");
  Eigen::MatrixXd b(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d) throw DomainError("lattice_from_json: basis shape mismatch");
    for (int k = 0; k < d; ++k) b(i, k) = rows[i][k].get<double>();
  }
  return Lattice(b);
}

}  // namespace jellium
