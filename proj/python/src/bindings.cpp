// Python bindings. Configs cross the boundary as JSON text; the Python package
// converts to and from dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msdg/errors.hpp"
#include "msdg/harness.hpp"

namespace py = pybind11;
using namespace msdg;

namespace {

ExperimentConfig parse(const std::string& text) { return config_from_json(nlohmann::json::parse(text)); }

py::dict convergence(const std::string& cfg_json) {
  const auto t = run_convergence(parse(cfg_json));
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict d;
    d["N"] = r.N;
    d["err_u"] = r.err_u;
    d["order_u"] = r.order_u;
    d["err_aux"] = r.err_aux;
    d["order_aux"] = r.order_aux;
    d["diverged"] = r.diverged;
    rows.append(d);
  }
  py::dict out;
  out["aux_name"] = t.aux_name;
  out["rows"] = rows;
  out["csv"] = t.csv();
  return out;
}

py::dict simulate(const std::string& cfg_json, const std::string& out_dir) {
  const auto r = run_simulation(parse(cfg_json), out_dir);
  py::list energy, error;
  for (const auto& e : r.energy) energy.append(py::make_tuple(e.t, e.E, e.dE, e.charge));
  for (const auto& [t, e] : r.error) error.append(py::make_tuple(t, e));
  py::dict out;
  out["t"] = r.t;
  out["steps"] = r.steps;
  out["diverged"] = r.diverged;
  out["message"] = r.message;
  out["energy"] = energy;
  out["error"] = error;
  out["files"] = r.files;
  out["state"] = r.state;
  out["max_abs_dE"] = r.max_abs_dE();
  return out;
}

py::dict verify(const std::vector<std::string>& models, int draws, double tol) {
  VerificationSpec spec;
  for (const auto& m : models) spec.models.push_back(parse_model(m));
  spec.draws = draws;
  spec.tol = tol;
  const auto rep = run_verification(spec);
  py::dict out;
  out["passed"] = rep.passed();
  out["max_ms"] = rep.max_ms;
  out["max_energy"] = rep.max_energy;
  out["rows"] = rep.rows.size();
  out["skipped"] = rep.skipped;
  out["not_applicable"] = rep.not_applicable;
  out["csv"] = rep.csv();
  return out;
}

// A reduced scheme built from a config at one resolution, with its problem data.
struct PyScheme {
  ExperimentConfig cfg;
  Problem problem;
  std::shared_ptr<ReducedScheme> scheme;

  PyScheme(const std::string& cfg_json, int N) : cfg(parse(cfg_json)), problem(make_problem(cfg)) {
    scheme = build_reduced_scheme(cfg.model, make_mesh(cfg, N), cfg.k, cfg.params, cfg.flux);
    if (problem.source) scheme->set_source(problem.source);
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-symplectic DG solver core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_FloatingPointError);

  m.def("preset_names", &preset_names);
  m.def("preset_json", [](const std::string& name) { return to_json(preset(name)).dump(); });
  m.def("normalize_config", [](const std::string& text) { return to_json(parse(text)).dump(); },
        "Parse and validate a config; returns it with defaults filled in.");
  m.def("compute_order", &compute_order, py::arg("errors"), py::arg("Ns"));
  m.def("run_convergence", &convergence, py::arg("config_json"));
  m.def("run_simulation", &simulate, py::arg("config_json"), py::arg("out_dir") = "");
  m.def("run_verification", &verify, py::arg("models") = std::vector<std::string>{}, py::arg("draws") = 20,
        py::arg("tol") = 1e-10);

  py::class_<PyScheme>(m, "Scheme")
      .def(py::init<const std::string&, int>(), py::arg("config_json"), py::arg("N"))
      .def_property_readonly("state_size", [](const PyScheme& s) { return s.scheme->state_size(); })
      .def_property_readonly("field_names", [](const PyScheme& s) { return s.scheme->field_names(); })
      .def_property_readonly("auxiliary_name", [](const PyScheme& s) { return s.scheme->auxiliary_name(); })
      .def("initial_state", [](const PyScheme& s) { return s.scheme->initial_state(s.problem.initial); })
      .def("rhs", [](const PyScheme& s, double t, const Vec& y) { return s.scheme->rhs(t, y); })
      .def("energy", [](const PyScheme& s, const Vec& y) { return s.scheme->energy(y); })
      .def("field", [](const PyScheme& s, const Vec& y, int i) { return s.scheme->field(y, i); })
      .def("sample",
           [](const PyScheme& s, const Vec& coeffs, int per_cell) {
             std::vector<double> x, u;
             sample(*s.scheme->space(), coeffs, per_cell, x, u);
             return py::make_tuple(x, u);
           },
           py::arg("coeffs"), py::arg("per_cell") = 10);
}
