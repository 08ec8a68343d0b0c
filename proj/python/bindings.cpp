#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jellium/epstein.hpp"
#include "jellium/error.hpp"
#include "jellium/jellium_finite.hpp"
#include "jellium/optimize.hpp"
#include "jellium/renorm.hpp"

namespace py = pybind11;
using namespace jellium;

namespace {

using PointsNx2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using PointsNx3 = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

std::vector<Eigen::Vector2d> to_points(const PointsNx2& m) {
  std::vector<Eigen::Vector2d> out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = m.row(i).transpose();
  return out;
}

PointsNx2 from_points(const std::vector<Eigen::Vector2d>& v) {
  PointsNx2 m(v.size(), 2);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(i) = v[i].transpose();
  return m;
}

PointsNx3 from_points3(const std::vector<Eigen::Vector3d>& v) {
  PointsNx3 m(v.size(), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(i) = v[i].transpose();
  return m;
}

EwaldParams params(double split, double tol) { return EwaldParams{split, 0.0, tol}; }

py::dict report_dict(const EnergyReport& r) {
  py::dict d;
  d["total"] = r.total;
  d["pairwise"] = r.pairwise;
  d["background"] = r.background;
  d["self_term"] = r.self_term;
  if (r.gradient_norm) d["gradient_norm"] = *r.gradient_norm;
  d["metadata"] = r.metadata.dump();
  return d;
}

OptimizerOptions options(int restarts, std::uint64_t seed, int max_iters, double grad_tol) {
  OptimizerOptions o;
  o.restarts = restarts;
  o.rng_seed = seed;
  o.max_iters = max_iters;
  o.grad_tol = grad_tol;
  return o;
}

py::list run_list(const std::vector<RunSummary>& runs) {
  py::list l;
  for (const auto& r : runs) l.append(py::dict(py::arg("seed") = r.seed, py::arg("energy") = r.energy,
                                               py::arg("grad_norm") = r.grad_norm,
                                               py::arg("iterations") = r.iterations, py::arg("status") = r.status));
  return l;
}

}  // namespace

PYBIND11_MODULE(_jellium, m) {
  m.doc() = "Jellium lattice energies, periodic Coulomb sums and energy minimization";

  static py::exception<Error> error(m, "Error");
  static py::exception<InputError> input_error(m, "InputError", error.ptr());
  static py::exception<NumericalError> numerical_error(m, "NumericalError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Lattice>(m, "Lattice")
      .def(py::init<Eigen::MatrixXd>(), py::arg("basis"), "Lattice generated by the columns of basis.")
      .def_property_readonly("dimension", &Lattice::dimension)
      .def_property_readonly("basis", &Lattice::basis)
      .def_property_readonly("covolume", &Lattice::covolume)
      .def("normalized", [](const Lattice& L) { return normalize(L); })
      .def("dual", [](const Lattice& L) { return dual(L); });
  m.def("triangular", &make_triangular);
  m.def("square", &make_square, py::arg("d") = 2);
  m.def("integers", &make_integers_1d);

  m.def("epstein_zeta", [](const Lattice& L, double s, double split, double tol) {
    return epstein_zeta(L, s, params(split, tol));
  }, py::arg("lattice"), py::arg("s"), py::arg("split") = 1.0, py::arg("tol") = 1e-14);
  m.def("epstein_zeta_deriv0", [](const Lattice& L, double split, double tol) {
    return epstein_zeta_deriv0(L, params(split, tol));
  }, py::arg("lattice"), py::arg("split") = 1.0, py::arg("tol") = 1e-14);
  m.def("closed_form_triangular", &closed_form_triangular, py::arg("s"));
  m.def("closed_form_triangular_deriv0", &closed_form_triangular_deriv0);
  m.def("lattice_jellium_energy", [](const Lattice& L, double s) { return lattice_jellium_energy(L, s); },
        py::arg("lattice"), py::arg("s"));
  m.def("direct_w_sum", [](const Lattice& L, double s, double quad_tol) {
    const auto r = direct_w_sum(L, s, quad_tol);
    return py::make_tuple(r.value, r.tail_bound);
  }, py::arg("lattice"), py::arg("s"), py::arg("quad_tol") = 1e-6, "Returns (value, tail_bound).");

  py::class_<Torus>(m, "Torus")
      .def(py::init<Lattice>(), py::arg("periods"))
      .def_static("square", &Torus::square, py::arg("ell"))
      .def_static("commensurate", &Torus::commensurate, py::arg("lattice"), py::arg("m"))
      .def_property_readonly("area", &Torus::area)
      .def_property_readonly("basis", &Torus::basis);
  m.def("g_periodic", [](const Torus& T, const Eigen::Vector2d& x) { return g_periodic(T, x); }, py::arg("torus"),
        py::arg("x"));
  m.def("self_constant", [](const Torus& T) { return self_constant(T); }, py::arg("torus"));
  m.def("madelung", []() { return madelung(); });
  m.def("sublattice_points", [](const Lattice& L, int k) { return from_points(sublattice_points(L, k)); },
        py::arg("lattice"), py::arg("m"));
  m.def("e_per", [](const Torus& T, const PointsNx2& pts) {
    return report_dict(e_per(PointConfiguration(T, to_points(pts))));
  }, py::arg("torus"), py::arg("points"));
  m.def("e_per_gradient", [](const Torus& T, const PointsNx2& pts) {
    return from_points(e_per_gradient(PointConfiguration(T, to_points(pts))));
  }, py::arg("torus"), py::arg("points"));
  m.def("w_periodic", [](const Torus& T, const PointsNx2& pts) {
    return w_periodic(PointConfiguration(T, to_points(pts)));
  }, py::arg("torus"), py::arg("points"));

  m.def("hex_patch_points", [](int k) { return from_points(hex_patch_points(k)); }, py::arg("k"));
  m.def("hex_patch_energy", [](int k) { return report_dict(jellium_energy(hex_patch(k), hex_patch_points(k))); },
        py::arg("k"), "Jellium energy of the triangular patch with 1 + 3k(k+1) cells.");
  m.def("jellium_energy_polygons", [](const std::vector<PointsNx2>& polygons, const PointsNx2& pts) {
    PolygonalDomain omega;
    for (const auto& p : polygons) omega.polygons.push_back(geom::Polygon{to_points(p)});
    return report_dict(jellium_energy(omega, to_points(pts)));
  }, py::arg("polygons"), py::arg("points"), "Polygons as counter-clockwise vertex arrays.");
  m.def("d_interaction_disks", [](const std::vector<std::tuple<double, double, double, double>>& f,
                                  const std::vector<std::tuple<double, double, double, double>>& g) {
    auto build = [](const auto& v) {
      ChargeSystem s;
      for (const auto& [x, y, a, q] : v) s.disks.push_back({Eigen::Vector2d(x, y), a, q});
      return s;
    };
    return d_interaction(build(f), build(g));
  }, py::arg("f"), py::arg("g"), "Disks given as (x, y, radius, charge).");
  m.def("lieb_narnhofer_bound", &lieb_narnhofer_bound, py::arg("a"));
  m.def("lieb_narnhofer_optimal", []() {
    const auto o = lieb_narnhofer_optimal();
    return py::make_tuple(o.a, o.bound);
  });

  m.def("minimize_sphere", [](std::size_t n, int restarts, std::uint64_t seed, int max_iters, double grad_tol) {
    const auto r = minimize_sphere(n, options(restarts, seed, max_iters, grad_tol));
    py::dict d;
    d["energy"] = r.energy;
    d["points"] = from_points3(r.config.points());
    d["status"] = r.best.status;
    d["seed"] = r.best.seed;
    d["runs"] = run_list(r.runs);
    return d;
  }, py::arg("n"), py::arg("restarts") = 1, py::arg("seed") = 0, py::arg("max_iters") = 5000,
     py::arg("grad_tol") = 1e-7);
  m.def("minimize_torus", [](const Torus& T, std::size_t n, int restarts, std::uint64_t seed, int max_iters,
                             double grad_tol) {
    const auto r = minimize_torus(T, n, options(restarts, seed, max_iters, grad_tol));
    py::dict d;
    d["energy"] = r.report.total;
    d["points"] = from_points(r.config.points());
    d["status"] = r.best.status;
    d["seed"] = r.best.seed;
    d["runs"] = run_list(r.runs);
    return d;
  }, py::arg("torus"), py::arg("n"), py::arg("restarts") = 1, py::arg("seed") = 0, py::arg("max_iters") = 5000,
     py::arg("grad_tol") = 1e-7);
  m.def("sphere_energy", [](const PointsNx3& x) {
    std::vector<Eigen::Vector3d> v(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) v[i] = x.row(i).transpose();
    return sphere_energy(v);
  }, py::arg("points"));
  m.def("c_log_estimate", &c_log_estimate, py::arg("n"), py::arg("energy"));

  m.def("w_scale", &w_scale, py::arg("w"), py::arg("m"));
  m.def("w_scale_consistent", &w_scale_consistent, py::arg("w"), py::arg("m"));
  m.def("c_log_from_w", &c_log_from_w, py::arg("w"));
  m.def("c_ds", &c_ds, py::arg("d"), py::arg("s"));
  m.def("bound_table_json", []() { return to_json(bound_table()).dump(); });
}
