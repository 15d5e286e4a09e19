#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldg/quadrature.hpp"
#include "ldg/runner.hpp"

namespace py = pybind11;
using namespace ldg;

namespace {

std::vector<double> to_vector(const Vec& v) {
  return {v.data(), v.data() + v.size()};
}

RunConfig config_from_dict(const py::dict& d) {
  RunConfig c;
  for (auto item : d) {
    std::string key = py::cast<std::string>(item.first);
    std::string value;
    if (py::isinstance<py::bool_>(item.second))
      value = py::cast<bool>(item.second) ? "on" : "off";
    else
      value = py::cast<std::string>(py::str(item.second));
    apply_override(c, key + "=" + value);
  }
  if (c.preset.empty()) throw ConfigError("config is missing 'preset'");
  return c;
}

py::dict result_to_dict(const RunResult& r) {
  py::dict out;
  switch (r.status) {
    case RunStatus::Ok: out["status"] = "ok"; break;
    case RunStatus::Breakdown: out["status"] = "breakdown"; break;
    case RunStatus::SolverFailure: out["status"] = "failed"; break;
  }
  out["detail"] = r.detail;
  out["steps"] = r.records.size() - 1;
  py::list time, entropy, mass, min_u;
  for (const auto& rec : r.records) {
    time.append(rec.time);
    entropy.append(rec.entropy);
    mass.append(rec.mass);
    min_u.append(rec.min_u);
  }
  out["time"] = time;
  out["entropy"] = entropy;
  out["mass"] = mass;
  out["min_u"] = min_u;
  out["max_u"] = r.max_u;
  out["min_u_run"] = r.min_u_run;
  out["final_rate"] = r.final_rate;
  out["final_state"] = to_vector(r.U_final);
  if (r.errors) {
    out["linf"] = r.errors->linf;
    out["l1"] = r.errors->l1;
    out["l2"] = r.errors->l2;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_ldgcore, m) {
  m.doc() = "Implicit LDG solver for degenerate parabolic equations";

  py::register_exception<ConfigError>(m, "ConfigError");

  m.def("preset_names", &preset_names);

  m.def("gauss_rule", [](int n) {
    QuadratureRule r = gauss_rule(n);
    return py::make_tuple(to_vector(r.points), to_vector(r.weights));
  });
  m.def("gauss_lobatto_rule", [](int n) {
    QuadratureRule r = gauss_lobatto_rule(n);
    return py::make_tuple(to_vector(r.points), to_vector(r.weights));
  });

  m.def("tableau", [](int order) {
    ButcherTableau t = tableau(order);
    py::dict out;
    out["stages"] = t.stages;
    out["order"] = t.order;
    py::list a;
    for (int i = 0; i < t.stages; ++i) {
      py::list row;
      for (int j = 0; j < t.stages; ++j) row.append(t.a(i, j));
      a.append(row);
    }
    out["a"] = a;
    out["b"] = to_vector(t.b);
    out["c"] = to_vector(t.c);
    return out;
  });

  m.def("run", [](const py::dict& config) {
    return result_to_dict(run(config_from_dict(config)));
  });

  m.def("run_table", [](const py::dict& config, const std::vector<int>& meshes) {
    auto rows = run_table(config_from_dict(config), meshes);
    py::list out;
    for (const auto& r : rows) {
      py::dict row;
      row["M"] = r.elements;
      row["linf"] = r.linf;
      row["linf_order"] = r.linf_order;
      row["l1"] = r.l1;
      row["l1_order"] = r.l1_order;
      row["min_u"] = r.min_u;
      out.append(row);
    }
    return out;
  });

  m.def("compare_runs", [](const std::string& a, const std::string& b) {
    CompareReport rep = compare_runs(a, b);
    py::dict out;
    out["columns"] = rep.columns;
    out["deltas"] = rep.deltas;
    out["final_state_delta"] = rep.final_state_delta;
    out["max_delta"] = rep.max_delta();
    return out;
  });
}
