#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "jellium/acceptance.hpp"
#include "jellium/epstein.hpp"
#include "jellium/error.hpp"
#include "jellium/jellium_finite.hpp"
#include "jellium/optimize.hpp"
#include "jellium/renorm.hpp"

using namespace jellium;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;  // validate found a failing criterion
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// key = value lines, '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

json typed(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) {
      if (v == std::floor(v) && s.find_first_of(".eE") == std::string::npos) return static_cast<long long>(v);
      return v;
    }
  } catch (const std::exception&) {
  }
  return s;
}

// Every option of the subcommand with its resolved value.
json resolved_config(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out") continue;
    if (opt->get_expected_min() == 0) {
      cfg[name] = opt->count() > 0;
    } else if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& r : opt->results()) arr.push_back(typed(r));
      cfg[name] = arr;
    } else if (opt->count() > 0) {
      cfg[name] = typed(opt->results().front());
    } else {
      cfg[name] = opt->get_default_str().empty() ? json(nullptr) : typed(opt->get_default_str());
    }
  }
  return cfg;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw DomainError("cannot write '" + out_path + "'");
    f << text;
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << text;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"schema", 1}, {"status", "error"}, {"kind", kind}, {"message", message}};
}

struct LatticeArgs {
  std::string name = "triangular";
  int dim = 2;
  std::string basis;
};

void add_lattice_options(CLI::App* sub, LatticeArgs& a) {
  sub->add_option("--lattice", a.name, "triangular, square, integers, cubic or custom")
      ->check(CLI::IsMember({"triangular", "square", "integers", "cubic", "custom"}));
  sub->add_option("--dim", a.dim, "dimension of the hypercubic lattice for --lattice square")->check(CLI::Range(1, 8));
  sub->add_option("--basis", a.basis, "custom basis vectors 'x1,y1;x2,y2' (normalized to unit covolume)");
}

Lattice make_lattice(const LatticeArgs& a) {
  if (a.name == "triangular") return make_triangular();
  if (a.name == "square") return make_square(a.dim);
  if (a.name == "integers") return make_integers_1d();
  if (a.name == "cubic") return make_square(3);
  if (a.basis.empty()) throw DomainError("--lattice custom needs --basis");
  std::vector<std::vector<double>> vecs;
  std::stringstream ss(a.basis);
  std::string vec;
  while (std::getline(ss, vec, ';')) {
    std::vector<double> v;
    std::stringstream vs(vec);
    std::string num;
    while (std::getline(vs, num, ',')) v.push_back(std::stod(num));
    vecs.push_back(v);
  }
  const std::size_t d = vecs.size();
  Eigen::MatrixXd B(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    if (vecs[j].size() != d) throw DomainError("--basis: need d vectors of length d");
    for (std::size_t i = 0; i < d; ++i) B(i, j) = vecs[j][i];
  }
  return normalize(Lattice(B));
}

json epstein_json(const EpsteinResult& r) {
  return {{"value", r.value}, {"tol_achieved", r.tol_achieved}, {"backend", r.backend}};
}

json direct_json(const DirectSumResult& r) {
  return {{"value", r.value}, {"tol_achieved", r.tail_bound}, {"backend", "direct"},
          {"radius", r.radius}, {"terms", r.terms}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jellium lattice energies, periodic Coulomb sums and energy minimization"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path, out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value file; flags override it");
    sub->add_option("--out", out_path, "write JSON here instead of stdout");
  };

  // epstein
  LatticeArgs ep_lat;
  double ep_s = 0.0, ep_split = 1.0, ep_tol = 1e-14, ep_quad_tol = 1e-6;
  bool ep_deriv = false;
  std::string ep_backend = "ewald";
  auto* ep = app.add_subcommand("epstein", "Epstein zeta value or s-derivative at 0");
  add_lattice_options(ep, ep_lat);
  ep->add_option("--s", ep_s, "exponent");
  ep->add_flag("--deriv", ep_deriv, "d/ds at s = 0 instead of the value");
  ep->add_option("--split", ep_split, "Ewald split parameter")->check(CLI::PositiveNumber);
  ep->add_option("--tol", ep_tol, "truncation tolerance")->check(CLI::PositiveNumber);
  ep->add_option("--backend", ep_backend, "ewald or direct")->check(CLI::IsMember({"ewald", "direct"}));
  ep->add_option("--quad-tol", ep_quad_tol, "tail tolerance of the direct backend")->check(CLI::PositiveNumber);
  add_common(ep);

  // lattice-energy
  LatticeArgs le_lat;
  double le_s = 0.0, le_split = 1.0, le_tol = 1e-14;
  auto* le = app.add_subcommand("lattice-energy", "Jellium energy per point of a lattice for the Riesz kernel");
  add_lattice_options(le, le_lat);
  le->add_option("--s", le_s, "Riesz exponent, d - 4 < s < d");
  le->add_option("--split", le_split, "Ewald split parameter")->check(CLI::PositiveNumber);
  le->add_option("--tol", le_tol, "truncation tolerance")->check(CLI::PositiveNumber);
  add_common(le);

  // torus-min
  std::string tm_lattice = "triangular", tm_init = "random", tm_trace;
  int tm_cells = 6, tm_restarts = 1, tm_max_iters = 5000;
  std::size_t tm_n = 0;
  double tm_jitter = 0.0, tm_grad_tol = 1e-7;
  std::uint64_t tm_seed = 0;
  auto* tm = app.add_subcommand("torus-min", "Minimize the periodic Jellium energy on a torus");
  tm->add_option("--lattice", tm_lattice, "torus shape: triangular or square")
      ->check(CLI::IsMember({"triangular", "square"}));
  tm->add_option("--cells", tm_cells, "torus = cells x cells copies of the unit lattice")->check(CLI::PositiveNumber);
  tm->add_option("--n", tm_n, "number of points (default cells^2, density 1)");
  tm->add_option("--init", tm_init, "random or sublattice")->check(CLI::IsMember({"random", "sublattice"}));
  tm->add_option("--jitter", tm_jitter, "Gaussian jitter added to a sublattice start")->check(CLI::NonNegativeNumber);
  tm->add_option("--restarts", tm_restarts, "random restarts")->check(CLI::PositiveNumber);
  tm->add_option("--seed", tm_seed, "first seed");
  tm->add_option("--max-iters", tm_max_iters, "iteration cap")->check(CLI::PositiveNumber);
  tm->add_option("--grad-tol", tm_grad_tol, "gradient norm target")->check(CLI::PositiveNumber);
  tm->add_option("--trace", tm_trace, "CSV trace of the best run");
  add_common(tm);

  // sphere-min
  std::size_t sm_n = 4;
  int sm_restarts = 1, sm_max_iters = 5000;
  std::uint64_t sm_seed = 0;
  double sm_grad_tol = 1e-7;
  std::string sm_trace;
  auto* sm = app.add_subcommand("sphere-min", "Minimize the logarithmic energy of points on the sphere");
  sm->add_option("--n", sm_n, "number of points")->check(CLI::Range(2, 100000));
  sm->add_option("--restarts", sm_restarts, "random restarts")->check(CLI::PositiveNumber);
  sm->add_option("--seed", sm_seed, "first seed");
  sm->add_option("--max-iters", sm_max_iters, "iteration cap")->check(CLI::PositiveNumber);
  sm->add_option("--grad-tol", sm_grad_tol, "tangent gradient norm target")->check(CLI::PositiveNumber);
  sm->add_option("--trace", sm_trace, "CSV trace of the best run");
  add_common(sm);

  // jellium-finite
  int jf_patch = 3;
  double jf_a = 0.0, jf_tol = 1e-8;
  std::string jf_breakdown, jf_input;
  auto* jf = app.add_subcommand("jellium-finite", "Finite-domain Jellium energy of a hexagonal patch or a given domain");
  jf->add_option("--patch", jf_patch, "hexagonal patch radius k (1 + 3k(k+1) cells)")->check(CLI::NonNegativeNumber);
  jf->add_option("--input", jf_input, "JSON file {domain, points} used instead of --patch");
  jf->add_option("--a", jf_a, "smearing radius for the lower-bound decomposition (0: skip)")
      ->check(CLI::NonNegativeNumber);
  jf->add_option("--tol", jf_tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  jf->add_option("--breakdown", jf_breakdown, "CSV file for the term breakdown");
  add_common(jf);

  // bounds
  auto* bd = app.add_subcommand("bounds", "Recomputed bound table for the renormalized energy and c_log");
  add_common(bd);

  // validate
  bool va_quick = false;
  std::vector<std::string> va_tamper;
  std::vector<int> va_only;
  auto* va = app.add_subcommand("validate", "Run the acceptance criteria");
  va->add_flag("--quick", va_quick, "skip criteria budgeted above 60 s");
  va->add_option("--tamper", va_tamper, "override a reference value, name=value (negative control)");
  va->add_option("--only", va_only, "criterion ids to run");
  add_common(va);

  // Config file: its keys become flags that the command line has not set.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string cfg_file;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") cfg_file = args[i + 1];
    for (const auto& a : args)
      if (a.rfind("--config=", 0) == 0) cfg_file = a.substr(9);
    if (!cfg_file.empty()) {
      CLI::App* sub = nullptr;
      for (const auto& a : args)
        for (auto* s : app.get_subcommands({}))
          if (s->get_name() == a) sub = s;
      if (!sub) throw DomainError("--config needs a subcommand");
      for (const auto& [key, value] : read_config(cfg_file)) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = nullptr;
        try {
          opt = sub->get_option(flag);
        } catch (const CLI::OptionNotFound&) {
          throw DomainError("config: unknown key '" + key + "' for " + sub->get_name());
        }
        if (key == "config" || key == "out") throw DomainError("config: key '" + key + "' not allowed");
        bool given = false;
        for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
        if (given) continue;
        if (opt->get_expected_min() == 0) {
          if (value == "true") args.push_back(flag);
          else if (value != "false") throw DomainError("config: '" + key + "' expects true or false");
        } else {
          args.push_back(flag);
          args.push_back(value);
        }
      }
    }
  } catch (const Error& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return kExitUsage;
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  json out = {{"schema", 1}, {"status", "ok"}, {"command", sub->get_name()}, {"config", resolved_config(sub)}};
  int exit_code = 0;
  try {
    if (sub == ep) {
      const Lattice L = make_lattice(ep_lat);
      out["config"]["basis"] = to_json(L)["basis"];
      if (ep_backend == "direct") {
        out["result"] = direct_json(ep_deriv ? direct_w_sum_deriv0(L, ep_quad_tol) : direct_w_sum(L, ep_s, ep_quad_tol));
      } else {
        const EwaldParams p{ep_split, 0.0, ep_tol};
        out["result"] = epstein_json(ep_deriv ? epstein_zeta_deriv0_report(L, p) : epstein_zeta_report(L, ep_s, p));
      }
      if (ep_lat.name == "triangular")
        out["result"]["closed_form"] = ep_deriv ? closed_form_triangular_deriv0() : closed_form_triangular(ep_s);
    } else if (sub == le) {
      const Lattice L = make_lattice(le_lat);
      out["result"] = epstein_json(lattice_jellium_energy_report(L, le_s, EwaldParams{le_split, 0.0, le_tol}));
    } else if (sub == tm) {
      const Lattice L = tm_lattice == "triangular" ? make_triangular() : make_square(2);
      const Torus T = Torus::commensurate(L, tm_cells);
      OptimizerOptions o;
      o.max_iters = tm_max_iters;
      o.grad_tol = tm_grad_tol;
      o.restarts = tm_restarts;
      o.rng_seed = tm_seed;
      const std::size_t n = tm_n ? tm_n : static_cast<std::size_t>(tm_cells) * tm_cells;
      std::optional<TorusResult> res;
      if (tm_init == "sublattice") {
        if (n != static_cast<std::size_t>(tm_cells) * tm_cells)
          throw DomainError("--init sublattice needs n = cells^2");
        auto pts = sublattice_configuration(L, tm_cells).points();
        std::mt19937_64 rng(tm_seed);
        std::normal_distribution<double> g(0.0, tm_jitter);
        if (tm_jitter > 0.0)
          for (auto& p : pts) p += Eigen::Vector2d(g(rng), g(rng));
        res = minimize_torus(PointConfiguration(T, pts), o);
      } else {
        res = minimize_torus(T, n, o);
      }
      json runs = json::array();
      for (const auto& r : res->runs) runs.push_back(to_json(r));
      out["result"] = {{"energy", res->report.total},
                       {"energy_per_point", res->report.total / n},
                       {"report", to_json(res->report)},
                       {"best", to_json(res->best)},
                       {"runs", runs},
                       {"configuration", to_json(res->config)}};
      if (!tm_trace.empty()) write_file(tm_trace, trace_csv(res->best.trace));
    } else if (sub == sm) {
      OptimizerOptions o;
      o.max_iters = sm_max_iters;
      o.grad_tol = sm_grad_tol;
      o.restarts = sm_restarts;
      o.rng_seed = sm_seed;
      const auto res = minimize_sphere(sm_n, o);
      json runs = json::array();
      for (const auto& r : res.runs) runs.push_back(to_json(r));
      out["result"] = {{"energy", res.energy},
                       {"c_log_estimate", c_log_estimate(sm_n, res.energy)},
                       {"best", to_json(res.best)},
                       {"runs", runs},
                       {"configuration", to_json(res.config)}};
      if (!sm_trace.empty()) write_file(sm_trace, trace_csv(res.best.trace));
    } else if (sub == jf) {
      PolygonalDomain omega;
      std::vector<Eigen::Vector2d> pts;
      if (!jf_input.empty()) {
        std::ifstream in(jf_input);
        if (!in) throw DomainError("cannot read '" + jf_input + "'");
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw DomainError(std::string("--input: ") + e.what());
        }
        omega = domain_from_json(j.at("domain"));
        for (const auto& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      } else {
        omega = hex_patch(jf_patch);
        pts = hex_patch_points(jf_patch);
      }
      const EnergyReport r = jellium_energy(omega, pts, jf_tol);
      out["result"] = {{"energy", r.total},
                       {"energy_per_point", r.total / pts.size()},
                       {"n", pts.size()},
                       {"report", to_json(r)},
                       {"lower_bound_per_point", lieb_narnhofer_optimal().bound},
                       {"domain", to_json(omega)}};
      if (jf_a > 0.0) out["result"]["decomposition"] = to_json(lower_bound_decomposition(omega, pts, jf_a, jf_tol));
      if (!jf_breakdown.empty()) write_file(jf_breakdown, breakdown_csv(r, jf_tol));
    } else if (sub == bd) {
      out["result"] = to_json(bound_table());
    } else if (sub == va) {
      acceptance::Options o;
      o.quick = va_quick;
      o.only = va_only;
      for (const auto& t : va_tamper) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw DomainError("--tamper expects name=value");
        try {
          o.references[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw DomainError("--tamper: value of '" + t.substr(0, eq) + "' is not a number");
        }
      }
      const auto results = acceptance::run(o);
      std::cerr << acceptance::summary_lines(results);
      out["result"] = acceptance::to_json(results);
      if (!acceptance::all_passed(results)) {
        out["status"] = "failed";
        exit_code = kExitFailure;
      }
    }
  } catch (const InputError& e) {
    std::cout << error_json(e.kind(), e.what()).dump(2) << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    json err = error_json(e.kind(), e.what());
    if (const auto* acc = dynamic_cast<const AccuracyError*>(&e)) err["achieved"] = acc->achieved();
    std::cout << err.dump(2) << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cout << error_json("internal", e.what()).dump(2) << "\n";
    return kExitNumerical;
  }

  try {
    emit(out, out_path);
  } catch (const Error& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return kExitUsage;
  }
  return exit_code;
}
