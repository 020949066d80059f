#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccx/engine.hpp"
#include "ccx/frontend.hpp"
#include "ccx/ground_cc.hpp"

namespace py = pybind11;
using namespace ccx;

namespace {

InequationPolicy policy_of(const std::string& s) {
  if (s == "drop") return InequationPolicy::Drop;
  if (s == "eq") return InequationPolicy::AsEquation;
  throw py::value_error("ineq must be 'drop' or 'eq'");
}

Mode mode_of(const std::string& s) {
  if (s == "ccx") return Mode::Ccx;
  if (s == "cc") return Mode::Cc;
  if (s == "both") return Mode::Both;
  throw py::value_error("mode must be 'ccx', 'cc' or 'both'");
}

std::vector<std::string> equations_of(const Problem& p) {
  std::vector<std::string> out;
  for (const auto& [l, r] : p.equations)
    out.push_back(to_string(l, p.sig, &p.var_names) + " = " + to_string(r, p.sig, &p.var_names));
  return out;
}

Bound bound_of(const Problem& p, unsigned depth) { return Bound::from_beta(build_beta(p.sig, depth)); }

std::optional<std::chrono::milliseconds> limit_of(std::optional<double> secs) {
  if (!secs || *secs <= 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long>(*secs * 1000));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-ground congruence closure over a bounded ground term space";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("notes", &Problem::notes)
      .def_property_readonly("equations", &equations_of)
      .def_property_readonly("symbols",
                             [](const Problem& p) {
                               std::vector<std::pair<std::string, unsigned>> out;
                               for (SymbolId f = 0; f < p.sig.size(); ++f)
                                 out.emplace_back(p.sig[f].name, p.sig[f].arity);
                               return out;
                             })
      .def("to_tptp", &to_tptp)
      .def("beta",
           [](const Problem& p, unsigned depth) { return to_string(build_beta(p.sig, depth), p.sig); },
           py::arg("depth"))
      .def("__repr__", [](const Problem& p) {
        return "<Problem " + p.name + " with " + std::to_string(p.equations.size()) + " equations>";
      });

  m.def("parse_tptp",
        [](const std::string& text, const std::string& ineq, const std::string& name) {
          return parse_tptp_ueq(text, policy_of(ineq), name);
        },
        py::arg("text"), py::arg("ineq") = "drop", py::arg("name") = "");
  m.def("parse_equations", &parse_equation_list, py::arg("text"), py::arg("name") = "");
  m.def("load", [](const std::string& path, const std::string& ineq) { return load_problem(path, policy_of(ineq)); },
        py::arg("path"), py::arg("ineq") = "drop");

  py::class_<SaturationResult>(m, "Saturation")
      .def_readonly("completed", &SaturationResult::completed)
      .def_property_readonly("derived_class_count", &SaturationResult::derived_class_count)
      .def_property_readonly("classes",
                             [](const SaturationResult& r) {
                               std::vector<std::string> out;
                               for (const auto& c : r.classes) out.push_back(to_string(c, r.sig));
                               return out;
                             })
      .def_property_readonly("initial_single", [](const SaturationResult& r) { return r.initial_single; })
      .def_property_readonly("stats",
                             [](const SaturationResult& r) {
                               py::dict d;
                               d["classes_created"] = r.stats.classes_created;
                               d["merges"] = r.stats.merges;
                               d["deductions"] = r.stats.deductions;
                               d["forward_subsumed"] = r.stats.forward_subsumed;
                               d["retired"] = r.stats.retired;
                               d["steps"] = r.stats.steps;
                               d["time_ms"] = r.stats.time_ms;
                               return d;
                             })
      .def("equal",
           [](const SaturationResult& r, const std::string& s, const std::string& t) {
             try {
               return query_equal(r, parse_ground_term(s, r.sig), parse_ground_term(t, r.sig));
             } catch (const std::invalid_argument& e) {
               throw py::value_error(e.what());
             }
           },
           py::arg("s"), py::arg("t"))
      .def("ground_blocks",
           [](const SaturationResult& r) {
             std::vector<std::vector<std::string>> out;
             for (const auto& b : ground_partition(r).blocks()) {
               out.emplace_back();
               for (const auto& t : b) out.back().push_back(to_string(t, r.sig));
             }
             return out;
           })
      .def("dump", [](const SaturationResult& r) { return dump(r); });

  m.def("saturate",
        [](const Problem& p, unsigned depth, std::optional<double> timeout_secs) {
          EngineOptions options;
          options.time_limit = limit_of(timeout_secs);
          py::gil_scoped_release release;
          return saturate(p.sig, p.equations, bound_of(p, depth), options);
        },
        py::arg("problem"), py::arg("depth") = 4, py::arg("timeout_secs") = py::none());

  m.def("ground_cc",
        [](const Problem& p, unsigned depth) {
          const GroundCcResult r = [&] {
            py::gil_scoped_release release;
            return run_ground_cc(p.sig, p.equations, bound_of(p, depth));
          }();
          py::dict d;
          d["completed"] = r.completed;
          d["blocks"] = r.partition.blocks_total();
          d["nonsingleton"] = r.partition.blocks_nonsingleton();
          d["time_ms"] = r.time_ms;
          return d;
        },
        py::arg("problem"), py::arg("depth") = 4);

  m.def("run",
        [](const Problem& p, const std::string& mode, unsigned depth, std::optional<double> timeout_secs) {
          RunConfig config;
          config.mode = mode_of(mode);
          config.depth = depth;
          config.timeout = limit_of(timeout_secs);
          ReportRow row;
          {
            py::gil_scoped_release release;
            row = run(config, p);
          }
          py::dict d;
          d["problem"] = row.problem;
          d["status_ccx"] = row.status_ccx;
          d["time_ccx_ms"] = row.time_ccx_ms;
          d["classes_ccx"] = row.classes_ccx;
          d["status_cc"] = row.status_cc;
          d["time_cc_ms"] = row.time_cc_ms;
          d["classes_cc"] = row.classes_cc;
          return d;
        },
        py::arg("problem"), py::arg("mode") = "both", py::arg("depth") = 4,
        py::arg("timeout_secs") = py::none());

  m.attr("CSV_HEADER") = csv_header();
}
