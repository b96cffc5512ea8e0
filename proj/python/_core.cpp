#include "mts/allocator.hpp"
#include "mts/channel.hpp"
#include "mts/config.hpp"
#include "mts/engine.hpp"
#include "mts/metrics.hpp"
#include "mts/tasks.hpp"
#include "selftest.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mts;

namespace {

ScenarioConfig config_from(const std::string& json_text, const py::dict& overrides) {
  ScenarioConfig cfg = load_config(json_text);
  for (const auto& [k, v] : overrides) {
    const auto key = py::str(k).cast<std::string>();
    const auto text = py::module_::import("json").attr("dumps")(v).cast<std::string>();
    set_config_value(cfg, key, text);
  }
  return cfg;
}

py::dict lts_dict(const LtsRecord& r) {
  py::dict d;
  d["lts"] = r.lts_index;
  d["y"] = r.y;
  d["admitted_per_type"] = r.admitted_per_type;
  d["revenue"] = r.revenue;
  d["cost"] = r.cost;
  d["utility"] = r.utility;
  d["avg_utility"] = r.average_utility;
  d["eta"] = r.eta;
  d["alg2_iterations"] = r.alg2_iterations;
  d["theorem1_holds"] = r.drift.holds;
  d["drift"] = r.drift.drift;
  d["bound_rhs"] = r.drift.bound_rhs;
  return d;
}

py::dict sts_dict(const StsRecord& r) {
  py::dict d;
  d["lts"] = r.lts_index;
  d["sts"] = r.sts_index;
  d["offload_bits"] = r.queues.offload_bits;
  d["bus_bits"] = r.queues.bus_bits;
  d["processing_gc"] = r.queues.processing_gc;
  d["power_w"] = r.power_w;
  d["objective"] = r.objective;
  d["alg1_iterations"] = r.alg1_iterations;
  d["alg1_converged"] = r.alg1_converged != 0;
  d["violations"] = r.violations;
  return d;
}

py::dict run_py(const std::string& config_json, const py::dict& overrides) {
  const auto cfg = config_from(config_json, overrides);
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run(cfg);
  }
  py::list lts, sts;
  for (const auto& l : r.lts) lts.append(lts_dict(l));
  for (const auto& s : r.sts) sts.append(sts_dict(s));
  py::dict out;
  out["lts"] = lts;
  out["sts"] = sts;
  out["mean_utility"] = r.mean_utility();
  out["mean_revenue"] = r.mean_revenue();
  out["mean_cost"] = r.mean_cost();
  out["mean_admitted"] = r.mean_admitted();
  out["violation_rate"] = r.violation_rate();
  out["config_hash"] = config_hash(cfg);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-time-scale admission and resource allocation simulator";
  m.attr("__version__") = MTS_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "default_config", [] { return to_json(ScenarioConfig{}); }, "Canonical JSON of the default scenario.");
  m.def(
      "normalize_config",
      [](const std::string& text, const py::dict& overrides) { return to_json(config_from(text, overrides)); },
      py::arg("config_json") = "", py::arg("overrides") = py::dict(),
      "Parses, applies overrides, validates and returns canonical JSON.");
  m.def("run", &run_py, py::arg("config_json") = "", py::arg("overrides") = py::dict(),
        "Runs the simulation; returns per-LTS and per-STS records plus summary means.");
  m.def(
      "emit",
      [](const std::string& text, const py::dict& overrides, const std::string& format, const std::string& dir) {
        const auto cfg = config_from(text, overrides);
        py::gil_scoped_release release;
        emit_metrics(run(cfg), cfg, parse_format(format), dir);
      },
      py::arg("config_json"), py::arg("overrides"), py::arg("format"), py::arg("out_dir"),
      "Runs and writes metric files, the manifest and the config into out_dir.");
  m.def(
      "selftest",
      [](const std::string& fault, std::uint64_t seed) {
        py::list out;
        for (const auto& r : selftest::run_all(selftest::parse_fault(fault), seed)) {
          py::dict d;
          d["name"] = r.name;
          d["instances"] = r.instances;
          d["failed_checks"] = r.failures;
          d["worst_error"] = r.worst_error;
          d["passed"] = r.passed();
          out.append(d);
        }
        return out;
      },
      py::arg("fault") = "none", py::arg("seed") = 2024);

  m.def("channel_gain", &channel_gain, py::arg("distance_m"), py::arg("carrier_ghz"));
  m.def("los_probability", &los_probability, py::arg("distance_m"));
  m.def("complexity", &complexity, py::arg("bytes"), py::arg("model_param"), py::arg("feature_maps") = 64);
  m.def(
      "solve_compute",
      [](std::vector<double> weight, double cubic, std::vector<double> floor, double capacity) {
        const auto s = solve_compute({std::move(weight), cubic, std::move(floor), capacity});
        return py::make_tuple(s.f, s.multiplier, s.feasible);
      },
      py::arg("weight"), py::arg("cubic"), py::arg("floor"), py::arg("capacity"),
      "Returns (f, multiplier, feasible).");
}
