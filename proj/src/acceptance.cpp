#include "jellium/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "jellium/epstein.hpp"
#include "jellium/error.hpp"
#include "jellium/greens.hpp"
#include "jellium/jellium_finite.hpp"
#include "jellium/optimize.hpp"
#include "jellium/periodic.hpp"
#include "jellium/renorm.hpp"

namespace jellium::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

// Outcome of a criterion body: pass flag plus what was measured.
struct Check {
  bool ok = true;
  std::vector<std::string> failures;
  nlohmann::json measured = nlohmann::json::object();

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
  void near(const std::string& key, double value, double target, double tol) {
    const double err = std::abs(value - target);
    measured[key] = {{"value", value}, {"target", target}, {"error", err}, {"tol", tol}};
    expect(err <= tol, key);
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Check(const std::map<std::string, double>&)> body;
};

double e_tri_formula() { return std::log(48.0 * kPi / std::pow(std::tgamma(1.0 / 6.0), 6)) / 8.0; }

Check triangular_energy(const std::map<std::string, double>& ref) {
  Check c;
  const double ewald = epstein_zeta_deriv0(make_triangular());
  const double closed = closed_form_triangular_deriv0();
  c.near("ewald_vs_closed_form", ewald, closed, 1e-9);
  c.near("ewald_vs_formula", ewald, e_tri_formula(), 1e-9);
  c.near("vs_published", ewald, ref.at("e_triangular"), 1e-4);
  return c;
}

Check crystal_1d(const std::map<std::string, double>& ref) {
  Check c;
  c.near("lattice_jellium_energy(Z, -1)", lattice_jellium_energy(make_integers_1d(), -1.0), ref.at("e_1d_s_minus1"),
         1e-9);
  return c;
}

Check lower_bound(const std::map<std::string, double>& ref) {
  Check c;
  const auto opt = lieb_narnhofer_optimal();
  c.near("a_star", opt.a, 1.0 / std::sqrt(kPi), 1e-12);
  c.near("bound_formula", opt.bound, -(0.375 + 0.25 * std::log(kPi)), 1e-12);
  c.near("bound_vs_published", opt.bound, ref.at("lower_bound"), 1e-4);
  const double e_tri = closed_form_triangular_deriv0();
  c.expect(e_tri > opt.bound, "triangular above bound");
  c.near("gap", e_tri - opt.bound, ref.at("gap"), 1e-5);
  return c;
}

Check backend_equivalence(const std::map<std::string, double>&) {
  Check c;
  const std::vector<std::tuple<std::string, Lattice, double>> cases = {
      {"square s=0.5", make_square(2), 0.5}, {"square s=1", make_square(2), 1.0}, {"triangular s=1", make_triangular(), 1.0}};
  for (const auto& [name, L, s] : cases) c.near(name, direct_w_sum(L, s).value, epstein_zeta(L, s), 1e-5);
  return c;
}

Check madelung_consistency(const std::map<std::string, double>&) {
  Check c;
  const Torus T = Torus::square(1.0);
  const double cT = self_constant(T);
  c.near("self_constant_vs_2zeta'", cT, 2.0 * epstein_zeta_deriv0(make_square(2)), 1e-8);
  const Eigen::Vector2d x(0.6e-3, 0.8e-3);
  c.near("G(x)+log|x| at |x|=1e-3", g_periodic(T, x) + std::log(x.norm()), cT, 1e-5);
  return c;
}

Check split_invariance(const std::map<std::string, double>&) {
  Check c;
  const double splits[] = {0.5, 1.0, 2.0};
  double worst = 0.0;
  auto spread = [&](const std::function<double(double)>& f) {
    const double ref = f(1.0);
    for (double sp : splits) worst = std::max(worst, std::abs(f(sp) - ref) / std::max(1.0, std::abs(ref)));
  };
  Eigen::Matrix2d rect;
  rect << 1.0, 0.0, 0.0, 2.0;
  const std::vector<Lattice> lattices2 = {make_square(2), make_triangular(), normalize(Lattice(rect))};
  for (const auto& L : lattices2) {
    for (double s : {-1.5, -0.5, 0.5, 1.0, 1.5, 3.0}) spread([&](double sp) { return epstein_zeta(L, s, {sp}); });
    spread([&](double sp) { return epstein_zeta_deriv0(L, {sp}); });
  }
  for (double s : {-1.0, 0.5, 2.0}) spread([&](double sp) { return epstein_zeta(make_integers_1d(), s, {sp}); });
  for (double s : {0.5, 2.0, 4.0}) spread([&](double sp) { return epstein_zeta(make_square(3), s, {sp}); });
  for (const Torus& T : {Torus::square(1.0), Torus::commensurate(make_triangular(), 2)})
    for (const Eigen::Vector2d& x : {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.01, -0.3)})
      spread([&](double sp) { return g_periodic(T, x, {sp}); });
  c.measured["max_relative_spread"] = worst;
  c.measured["tol"] = 1e-10;
  c.expect(worst <= 1e-10, "split spread");
  return c;
}

Check sublattice_identity(const std::map<std::string, double>& ref) {
  Check c;
  const auto cfg = sublattice_configuration(make_triangular(), 6);
  c.near("e_per/n", e_per(cfg).total / cfg.size(), ref.at("e_triangular_6"), 1e-6);
  c.near("w_periodic", w_periodic(cfg), ref.at("min_W_upper"), 1e-4);
  return c;
}

Check bound_table_check(const std::map<std::string, double>& ref) {
  Check c;
  const BoundTable t = bound_table();
  for (const auto& key : {"min_W_upper", "min_W_lower", "steinerberger_W", "c_log_lower", "c_log_upper",
                          "steinerberger_c_log"})
    c.near(key, t.at(key).value, ref.at(key), 1e-4);
  c.expect(t.at("steinerberger_W").value < t.at("min_W_lower").value, "steinerberger_W < min_W_lower");
  c.expect(t.at("min_W_lower").value <= t.at("min_W_upper").value, "min_W_lower <= min_W_upper");
  return c;
}

Check optimizer(const std::map<std::string, double>& ref) {
  Check c;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  const double h = 1e-6;
  double worst_torus = 0.0, worst_sphere = 0.0;
  const Torus T = Torus::commensurate(make_triangular(), 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 9; ++i) pts.push_back(T.basis() * Eigen::Vector2d(u(rng), u(rng)));
    const auto grad = e_per_gradient(PointConfiguration(T, pts));
    double gmax = 0.0, err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k < 2; ++k) {
        auto p = pts, m = pts;
        p[i][k] += h;
        m[i][k] -= h;
        const double fd = (e_per(PointConfiguration(T, p)).total - e_per(PointConfiguration(T, m)).total) / (2 * h);
        gmax = std::max(gmax, std::abs(grad[i][k]));
        err = std::max(err, std::abs(fd - grad[i][k]));
      }
    worst_torus = std::max(worst_torus, err / gmax);

    std::vector<Eigen::Vector3d> x(12);
    for (auto& v : x) v = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const auto sg = sphere_gradient(x);
    gmax = err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int k = 0; k < 3; ++k) {
        auto p = x, m = x;
        p[i][k] += h;
        m[i][k] -= h;
        const double fd = (sphere_energy(p) - sphere_energy(m)) / (2 * h);
        gmax = std::max(gmax, std::abs(sg[i][k]));
        err = std::max(err, std::abs(fd - sg[i][k]));
      }
    worst_sphere = std::max(worst_sphere, err / gmax);
  }
  c.measured["fd_relative_error_torus"] = worst_torus;
  c.measured["fd_relative_error_sphere"] = worst_sphere;
  c.expect(worst_torus <= 1e-5, "torus gradient vs finite differences");
  c.expect(worst_sphere <= 1e-5, "sphere gradient vs finite differences");

  auto monotone = [](const RunSummary& r) {
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      if (r.trace[i].energy > r.trace[i - 1].energy) return false;
    return true;
  };
  const auto crystal = sublattice_configuration(make_triangular(), 6);
  const double e0 = e_per(crystal).total;
  double worst_return = 0.0;
  bool traces_ok = true;
  for (int trial = 0; trial < 3; ++trial) {
    std::normal_distribution<double> jitter(0.0, 0.05);
    auto pts = crystal.points();
    for (auto& p : pts) p += Eigen::Vector2d(jitter(rng), jitter(rng));
    const auto r = minimize_torus(PointConfiguration(crystal.torus(), pts));
    traces_ok = traces_ok && monotone(r.best);
    worst_return = std::max(worst_return, std::abs(r.report.total - e0));
  }
  c.near("perturbed_triangular_return", worst_return, 0.0, 1e-6 * 36);

  OptimizerOptions o;
  o.restarts = 8;
  o.rng_seed = 1;
  const std::pair<int, double> sphere_cases[] = {{2, ref.at("sphere_2")},
                                                 {3, ref.at("sphere_3")},
                                                 {4, ref.at("sphere_4")},
                                                 {6, ref.at("sphere_6")}};
  for (const auto& [n, target] : sphere_cases) {
    const auto r = minimize_sphere(n, o);
    for (const auto& run : r.runs) traces_ok = traces_ok && monotone(run);
    c.near("sphere_n=" + std::to_string(n), r.energy, target, 1e-7);
  }
  c.measured["traces_non_increasing"] = traces_ok;
  c.expect(traces_ok, "energy traces non-increasing");
  return c;
}

Check positivity(const std::map<std::string, double>&) {
  Check c;
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ur(0.05, 0.8);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    ChargeSystem f;
    double q = 0.0;
    const int n = 2 + trial % 6;
    for (int i = 0; i < n; ++i) {
      f.disks.push_back({Eigen::Vector2d(u(rng), u(rng)), ur(rng), u(rng)});
      q += f.disks.back().charge;
    }
    if (trial % 3 == 0) {
      const double cx = u(rng), cy = u(rng), side = 0.3 + ur(rng);
      geom::Polygon sq{{{cx, cy}, {cx + side, cy}, {cx + side, cy + side}, {cx, cy + side}}};
      f.regions.push_back({PolygonalDomain{{sq}, {}}, -q / sq.area()});
    } else {
      f.disks.push_back({Eigen::Vector2d(u(rng), u(rng)), ur(rng), -q});
    }
    worst = std::min(worst, d_self(f));
  }
  c.measured["min_D"] = worst;
  c.measured["tol"] = -1e-8;
  c.expect(worst >= -1e-8, "D(f) >= -1e-8");
  return c;
}

Check finite_trend(const std::map<std::string, double>& ref) {
  Check c;
  const double bound = lieb_narnhofer_optimal().bound;
  const double target = ref.at("e_triangular_finite");
  double gaps[2];
  int i = 0;
  for (int k : {3, 6}) {
    const auto pts = hex_patch_points(k);
    const double e = jellium_energy(hex_patch(k), pts).total / pts.size();
    const std::string key = std::to_string(pts.size()) + "_cells";
    gaps[i++] = std::abs(e - target);
    c.measured[key] = {{"E/N", e}, {"gap", std::abs(e - target)}};
    c.expect(e > bound, key + " above bound");
  }
  c.expect(gaps[1] < gaps[0], "gap decreases");
  return c;
}

Check sphere_asymptote(const std::map<std::string, double>&) {
  Check c;
  for (int n : {50, 100, 200}) {
    OptimizerOptions o;
    o.rng_seed = 7;
    const auto r = minimize_sphere(n, o);
    const double est = c_log_estimate(n, r.energy);
    c.measured["n=" + std::to_string(n)] = {
        {"energy", r.energy}, {"c_log_estimate", est}, {"status", r.best.status}, {"grad_norm", r.best.grad_norm}};
    c.expect(est >= -0.12 && est <= 0.0, "c_log estimate at n=" + std::to_string(n) + " in [-0.12, 0]");
  }
  return c;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "triangular lattice energy", 5.0, triangular_energy},
      {2, "1D crystallization value", 1.0, crystal_1d},
      {3, "lower bound", 5.0, lower_bound},
      {4, "backend equivalence", 60.0, backend_equivalence},
      {5, "Madelung consistency", 5.0, madelung_consistency},
      {6, "Ewald split invariance", 30.0, split_invariance},
      {7, "periodic sublattice identity", 5.0, sublattice_identity},
      {8, "bound table", 5.0, bound_table_check},
      {9, "optimizer correctness", 300.0, optimizer},
      {10, "positivity of D", 30.0, positivity},
      {11, "finite Jellium trend", 600.0, finite_trend},
      {12, "sphere asymptote diagnostic", 120.0, sphere_asymptote},
  };
  return list;
}

}  // namespace

std::map<std::string, double> default_references() {
  return {
      {"e_triangular", -0.66056},
      {"e_triangular_6", -0.660559},
      {"e_triangular_finite", -0.6606},
      {"e_1d_s_minus1", 1.0 / 12.0},
      {"lower_bound", -0.66118},
      {"gap", 0.66118 - 0.66056},
      {"min_W_upper", -4.1504},
      {"min_W_lower", -4.1543},
      {"steinerberger_W", -4.2756},
      {"c_log_lower", -0.056853},
      {"c_log_upper", -0.05561},
      {"steinerberger_c_log", -0.0954},
      {"sphere_2", -2.0 * std::log(2.0)},
      {"sphere_3", -3.0 * std::log(3.0)},
      {"sphere_4", -6.0 * std::log(8.0 / 3.0)},
      {"sphere_6", -18.0 * std::log(2.0)},
  };
}

std::vector<Result> run(const Options& opts) {
  std::map<std::string, double> refs = default_references();
  for (const auto& [k, v] : opts.references) {
    if (!refs.count(k)) throw DomainError("acceptance: unknown reference '" + k + "'");
    refs[k] = v;
  }
  std::vector<Result> out;
  for (const auto& c : criteria()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
    Result r{c.id, c.name, "pass", "", nlohmann::json::object(), 0.0};
    if (opts.quick && c.budget_seconds > 60.0) {
      r.status = "skipped";
      r.detail = "budget above 60 s (--quick)";
      out.push_back(r);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Check chk = c.body(refs);
      r.measured = chk.measured;
      if (!chk.ok) {
        r.status = "fail";
        std::string msg;
        for (const auto& f : chk.failures) msg += (msg.empty() ? "" : "; ") + f;
        r.detail = "failed: " + msg;
      }
    } catch (const std::exception& e) {
      r.status = "fail";
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.measured["budget_seconds"] = c.budget_seconds;
    if (r.status == "pass" && r.seconds > c.budget_seconds) {
      r.status = "fail";
      r.detail = "runtime over budget";
    }
    out.push_back(r);
  }
  return out;
}

nlohmann::json to_json(const std::vector<Result>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"status", r.status},
                   {"detail", r.detail},
                   {"measured", r.measured},
                   {"seconds", r.seconds}});
  return {{"criteria", arr}, {"passed", all_passed(results)}};
}

std::string summary_lines(const std::vector<Result>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    std::string tag = r.status == "pass" ? "PASS" : r.status == "fail" ? "FAIL" : "SKIP";
    os << "criterion " << r.id << " [" << tag << "] " << r.name;
    if (!r.detail.empty()) os << ": " << r.detail;
    os << " (" << std::fixed;
    os.precision(2);
    os << r.seconds << " s)\n";
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

bool all_passed(const std::vector<Result>& results) {
  for (const auto& r : results)
    if (r.status == "fail") return false;
  return true;
}

}  // namespace jellium::acceptance
