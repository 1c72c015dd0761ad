#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pcause/cause.hpp"
#include "pcause/cost_expected.hpp"
#include "pcause/cost_instantaneous.hpp"
#include "pcause/cost_maximal.hpp"
#include "pcause/cost_partial.hpp"
#include "pcause/errors.hpp"
#include "pcause/json_io.hpp"
#include "pcause/monitor.hpp"
#include "pcause/omega.hpp"
#include "pcause/oracle.hpp"

namespace py = pybind11;
using namespace pcause;

namespace {

// Accepts str, int and fractions.Fraction; str() of a Fraction is "num/den".
Rat to_rat(const py::object& value) { return parse_rat(py::str(value).cast<std::string>()); }

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& value) {
  return Json::parse(py::module_::import("json").attr("dumps")(value).cast<std::string>());
}

CostKind accumulated_kind(const std::string& name) {
  auto kind = parse_cost_kind(name);
  if (!kind || static_cast<int>(*kind) > static_cast<int>(CostKind::maxcost)) {
    throw py::value_error("cost must be 'expcost', 'pexpcost' or 'maxcost'");
  }
  return *kind;
}

CostResult minimize(const PreparedModel& pm, CostKind kind) {
  switch (kind) {
    case CostKind::expcost: return expcost_minimal(pm);
    case CostKind::pexpcost: return pexpcost_minimal(pm);
    default: return maxcost_minimal(pm);
  }
}

std::string cost_of(const PreparedModel& pm, const py::object& cause, const std::string& cost) {
  auto c = cause_from_json(pm, from_py(cause));
  switch (accumulated_kind(cost)) {
    case CostKind::expcost: return to_string(expcost_of(pm, c));
    case CostKind::pexpcost: return to_string(pexpcost_of(pm, c));
    default: return to_string(maxcost_of(pm, c));
  }
}

py::object minimize_instantaneous(const Dtmc& m, const py::object& p, const std::string& cost) {
  auto im = make_inst_model(m, to_rat(p));
  CostResult res;
  switch (accumulated_kind(cost)) {
    case CostKind::expcost: res = expcost_inst_minimal(im); break;
    case CostKind::pexpcost: res = pexpcost_inst_minimal(im); break;
    default: res = maxcost_inst_minimal(im); break;
  }
  return to_py(result_json(res, [&](StateId s) { return im.chain.name(s); }));
}

py::object product_cause(const Dtmc& m, const std::string& dra_text, const py::object& p, std::size_t depth) {
  const Dra a = parse_dra(dra_text);
  const Rat pr = to_rat(p);
  auto prod = build_product(m, a);
  auto ppm = prod.prepare(pr);
  auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), depth);
  Json out;
  out["probability"] = rat_json(prod.effect_probability());
  out["product_states"] = prod.chain.size();
  out.update(projected_json(m, proj, verify_projected(m, a, pr, proj)));
  return to_py(out);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Exact p-cause analysis of discrete-time Markov chains";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ModelError>(mod, "ModelError", base.ptr());
  py::register_exception<UnsupportedError>(mod, "UnsupportedError", base.ptr());
  py::register_exception<CauseError>(mod, "CauseError", base.ptr());
  py::register_exception<LimitError>(mod, "LimitError", base.ptr());

  py::class_<Dtmc>(mod, "Model")
      .def_static("parse", &parse_dtmc, py::arg("text"))
      .def_static("load", &load_dtmc, py::arg("path"))
      .def("__len__", &Dtmc::size)
      .def_property_readonly("init", [](const Dtmc& m) { return m.name(m.init()); })
      .def_property_readonly("states", [](const Dtmc& m) {
        std::vector<std::string> out;
        for (StateId s = 0; s < m.size(); ++s) out.push_back(m.name(s));
        return out;
      })
      .def("to_text", &Dtmc::to_text);

  py::class_<PreparedModel>(mod, "PreparedModel")
      .def("__len__", &PreparedModel::size)
      .def_property_readonly("p", [](const PreparedModel& pm) { return to_string(pm.p()); })
      .def_property_readonly("sp", [](const PreparedModel& pm) {
        std::vector<std::string> out;
        for (auto s : pm.sp()) out.push_back(pm.name(s));
        return out;
      })
      .def_property_readonly("q", [](const PreparedModel& pm) {
        py::dict out;
        for (StateId s = 0; s < pm.size(); ++s) out[py::str(pm.name(s))] = to_string(pm.q(s));
        return out;
      })
      .def_property_readonly("members", [](const PreparedModel& pm) {
        py::dict out;
        for (StateId s = 0; s < pm.size(); ++s) out[py::str(pm.name(s))] = pm.members()[s];
        return out;
      });

  mod.def(
      "prepare", [](const Dtmc& m, const py::object& p) { return preprocess(m, to_rat(p)); }, py::arg("model"),
      py::arg("p"), "Collapse targets and hopeless states and compute S_p.");
  mod.def(
      "canonical_cause", [](const PreparedModel& pm) { return to_py(cause_json(pm, canonical_cause(pm))); },
      py::arg("prepared"));
  mod.def(
      "verify",
      [](const PreparedModel& pm, const py::object& cause, std::size_t depth) {
        return to_py(verify_json(pm, verify_cause(pm, cause_from_json(pm, from_py(cause)), depth)));
      },
      py::arg("prepared"), py::arg("cause"), py::arg("depth") = 12);
  mod.def(
      "minimize",
      [](const PreparedModel& pm, const std::string& cost) {
        return to_py(result_json(pm, minimize(pm, accumulated_kind(cost))));
      },
      py::arg("prepared"), py::arg("cost"), "Cost-minimal cause for accumulated weights.");
  mod.def("cost_of", &cost_of, py::arg("prepared"), py::arg("cause"), py::arg("cost"));
  mod.def("minimize_instantaneous", &minimize_instantaneous, py::arg("model"), py::arg("p"), py::arg("cost"));
  mod.def(
      "brute_force_minimum",
      [](const PreparedModel& pm, const std::string& cost, std::size_t max_states) {
        return to_py(result_json(pm, brute_force_min(pm, accumulated_kind(cost), max_states)));
      },
      py::arg("prepared"), py::arg("cost"), py::arg("max_states") = 8);
  mod.def(
      "level_table_csv",
      [](const PreparedModel& pm) {
        std::ostringstream out;
        level_values(pm, saturation(pm)).write_csv(out);
        return out.str();
      },
      py::arg("prepared"));
  mod.def("product_cause", &product_cause, py::arg("model"), py::arg("dra"), py::arg("p"), py::arg("depth") = 12,
          "Canonical cause of an omega-regular property given as Rabin automaton text, projected onto the model.");

  py::class_<Monitor>(mod, "Monitor")
      .def_property_readonly("status", [](const Monitor& m) { return to_string(m.status()); })
      .def_property_readonly("steps", &Monitor::steps)
      .def_property_readonly("weight", [](const Monitor& m) { return to_string(m.weight()); })
      .def_property_readonly("memory_bits", &Monitor::memory_bits)
      .def("step", [](Monitor& m, const std::string& name) { return to_string(m.step(std::string_view(name)).status); })
      .def("run",
           [](Monitor& m, const std::vector<std::string>& trace) {
             std::vector<std::string> out;
             for (const auto& v : run_trace(m, trace)) out.push_back(to_string(v.status));
             return out;
           })
      .def("reset", &Monitor::reset);

  mod.def(
      "compile_monitor",
      [](const PreparedModel& pm, const py::object& cause) { return compile(pm, cause_from_json(pm, from_py(cause))); },
      py::arg("prepared"), py::arg("cause"), py::keep_alive<0, 1>());
}
