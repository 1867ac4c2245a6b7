// Python bindings: the main operations (run, selfcheck, simulate, presets)
// exposed over JSON documents, mirroring the command-line surface.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "ivfalsify/config.hpp"
#include "ivfalsify/runner.hpp"
#include "ivfalsify/simulate.hpp"

namespace py = pybind11;

PYBIND11_MODULE(ivfalsify, m) {
  m.doc() =
      "falsification tests for instrument validity under declared instrument-response "
      "restrictions, in exact rational arithmetic";

  py::class_<ivfalsify::Report>(m, "Report")
      .def_readonly("falsified", &ivfalsify::Report::falsified)
      .def_readonly("document", &ivfalsify::Report::document)
      .def_readonly("text", &ivfalsify::Report::text)
      .def("__repr__", [](const ivfalsify::Report& r) {
        return std::string("Report(falsified=") + (r.falsified ? "True" : "False") + ")";
      });

  py::class_<ivfalsify::SelfCheckResult>(m, "SelfCheckResult")
      .def_readonly("passed", &ivfalsify::SelfCheckResult::passed)
      .def_readonly("trials", &ivfalsify::SelfCheckResult::trials)
      .def_readonly("summary", &ivfalsify::SelfCheckResult::summary)
      .def("__repr__", [](const ivfalsify::SelfCheckResult& r) {
        return std::string("SelfCheckResult(passed=") + (r.passed ? "True" : "False") +
               ", trials=" + std::to_string(r.trials) + ")";
      });

  m.def(
      "run",
      [](const std::string& config_json) {
        return ivfalsify::run(ivfalsify::parse_run_config(config_json));
      },
      py::arg("config_json"),
      "Execute the configured checks on an observed law, given as a JSON run config; the "
      "report's `document` field is deterministic JSON.");

  m.def("selfcheck", &ivfalsify::selfcheck, py::arg("seed") = 1, py::arg("trials") = 100,
        "Cross-validate the solvers against independent routes (curated fixtures, linear "
        "system vs flow vs dominance family, brute-force referee, compliant-process "
        "soundness).");

  m.def(
      "worked_example_config",
      []() { return ivfalsify::run_config_json(ivfalsify::worked_example_run_config()); },
      "The built-in worked example as a runnable config document.");

  m.def(
      "worked_example_process",
      []() { return ivfalsify::dgp_config_json(ivfalsify::worked_example_dgp()); },
      "The process generating the worked example, as a process document.");

  m.def(
      "simulate",
      [](const std::string& process_json) {
        const ivfalsify::DGPSpec dgp = ivfalsify::parse_dgp_config(process_json);
        ivfalsify::RunConfig config;
        config.support = dgp.support;
        config.table = ivfalsify::generate_observed(dgp).to_cells();
        return ivfalsify::run_config_json(config);
      },
      py::arg("process_json"),
      "Emit the exact law of a declared process as a runnable config document.");

  m.def(
      "simulate_records",
      [](const std::string& process_json, long max_records) {
        const ivfalsify::DGPSpec dgp = ivfalsify::parse_dgp_config(process_json);
        const ivfalsify::ObservedDistribution observed = ivfalsify::generate_observed(dgp);
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const ivfalsify::Record& record :
             ivfalsify::records_realizing(observed, dgp.instrument_law, max_records)) {
          out.emplace_back(record.y, record.x, record.z);
        }
        return out;
      },
      py::arg("process_json"), py::arg("max_records") = 1000000,
      "Realize the law of a process exactly, as (y, x, z) record tuples; re-ingesting them "
      "reproduces the law.");

  m.def(
      "random_process",
      [](std::uint64_t seed, int treatments, int instruments, int bins,
         const std::string& restriction) {
        ivfalsify::RestrictionSpec spec;
        spec.preset = ivfalsify::preset_from_name(restriction);
        return ivfalsify::dgp_config_json(
            ivfalsify::random_valid_dgp(seed, treatments, instruments, bins, spec));
      },
      py::arg("seed"), py::arg("treatments") = 2, py::arg("instruments") = 2,
      py::arg("bins") = 2, py::arg("restriction") = "none",
      "Draw a process satisfying the named preset; its law always passes the checks.");

  m.def("restriction_presets", &ivfalsify::restriction_preset_catalog,
        "The built-in restriction presets as (name, description) pairs.");
}
