// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/corpus.hpp"
#include "qcomp/device.hpp"
#include "qcomp/features.hpp"
#include "qcomp/fom.hpp"
#include "qcomp/metrics.hpp"
#include "qcomp/passes.hpp"
#include "qcomp/pipeline.hpp"
#include "qcomp/qasm.hpp"
#include "qcomp/rl_env.hpp"
#include "qcomp/sim.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qcomp;

namespace {

py::dict metrics_dict(const Circuit& c) {
  const auto m = compute_metrics(c);
  py::dict counts;
  for (std::size_t g = 0; g < kNumGates; ++g) {
    if (m.gate_counts[g] > 0) {
      counts[py::str(std::string(gate_info(static_cast<Gate>(g)).name))] =
          m.gate_counts[g];
    }
  }
  py::dict out;
  out["depth"] = m.depth;
  out["gate_counts"] = counts;
  out["two_qubit_count"] = m.two_qubit_count;
  out["critical_path_two_qubit_count"] = m.critical_path_two_qubit_count;
  return out;
}

py::dict features_dict(const Circuit& c) {
  const auto f = extract_features(c);
  py::dict out;
  out["num_qubits"] = f.num_qubits;
  out["depth"] = f.depth;
  out["program_communication"] = f.program_communication;
  out["critical_depth"] = f.critical_depth_ratio;
  out["entanglement_ratio"] = f.entanglement_ratio;
  out["parallelism"] = f.parallelism;
  out["liveness"] = f.liveness;
  out["vector"] = f.to_vector();
  return out;
}

py::dict device_dict(const DeviceModel& d) {
  py::dict out;
  out["id"] = d.id;
  out["technology"] = technology_name(d.technology);
  out["num_qubits"] = d.num_qubits;
  out["num_couplings"] = d.coupling.size();
  std::vector<std::string> gates;
  for (const auto g : d.native_gates) {
    gates.emplace_back(gate_info(g).name);
  }
  out["native_gates"] = gates;
  return out;
}

py::dict outcome_dict(const CompileOutcome& outcome) {
  py::dict out;
  out["device"] = outcome.device_id;
  out["qasm"] = serialize_qasm(outcome.circuit);
  out["score"] = outcome.score;
  out["pass_log"] = outcome.pass_log;
  out["used_fallback"] = outcome.used_fallback;
  out["ranking"] = outcome.ranking;
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Device selection and device-specific compilation for quantum "
            "circuits";

  py::register_exception<QasmError>(m, "QasmError");
  py::register_exception<DeviceError>(m, "DeviceError");
  py::register_exception<BundleError>(m, "BundleError");

  m.def("parse_qasm", &parse_qasm, py::arg("text"),
        "Parse an OpenQASM 2.0 program into an opaque circuit handle.");
  m.def("serialize_qasm", &serialize_qasm, py::arg("circuit"));
  m.def(
      "num_qubits", [](const Circuit& c) { return c.num_qubits; },
      py::arg("circuit"));
  m.def("metrics", &metrics_dict, py::arg("circuit"),
        "Depth, gate counts and critical-path statistics.");
  m.def("features", &features_dict, py::arg("circuit"),
        "The classifier feature vector of a circuit.");
  m.def(
      "simulate",
      [](const Circuit& c) {
        auto stripped = c;
        stripped.measurements.clear();
        return simulate_statevector(stripped);
      },
      py::arg("circuit"), "Statevector of the gate part of a circuit.");
  m.def(
      "critical_depth_score",
      [](const Circuit& c) { return critical_depth_score(c); },
      py::arg("circuit"));

  m.def(
      "default_fleet",
      [] {
        py::list out;
        for (const auto& d : default_fleet()) {
          out.append(device_dict(d));
        }
        return out;
      },
      "Summaries of the seven built-in devices.");

  m.def(
      "generate_corpus",
      [](std::uint32_t min_qubits, std::uint32_t max_qubits, int instances,
         std::uint64_t seed, bool training) {
        CorpusSpec spec;
        spec.min_qubits = min_qubits;
        spec.max_qubits = max_qubits;
        spec.instances_per_size = instances;
        spec.seed = seed;
        spec.training = training;
        if (training) {
          spec.families = BundleConfig{}.train_spec.families;
        }
        py::dict out;
        for (const auto& [name, circuit] : generate_corpus(spec)) {
          out[py::str(name)] = serialize_qasm(circuit);
        }
        return out;
      },
      py::arg("min_qubits") = 2, py::arg("max_qubits") = 8,
      py::arg("instances") = 1, py::arg("seed") = 11,
      py::arg("training") = false,
      "Generate the built-in benchmark corpus as {name: qasm}.");

  m.def(
      "compile_baseline",
      [](const Circuit& c, const std::string& device_id, int level) {
        const auto fleet = default_fleet();
        for (const auto& d : fleet) {
          if (d.id == device_id) {
            const auto result = baseline_pipeline(
                c, d, level <= 1 ? BaselineLevel::L1 : BaselineLevel::L2);
            py::dict out;
            out["qasm"] = serialize_qasm(result.circuit);
            out["expected_fidelity"] =
                expected_fidelity(result.circuit, d, result.mapping).total;
            out["critical_depth"] = critical_depth_score(result.circuit);
            return out;
          }
        }
        throw DeviceError("unknown device id '" + device_id + "'");
      },
      py::arg("circuit"), py::arg("device_id"), py::arg("level") = 2,
      "Compile with a fixed baseline pipeline on a built-in device.");

  m.def(
      "train_bundle",
      [](const std::string& out_dir, std::uint64_t seed, int iterations,
         std::uint32_t min_qubits, std::uint32_t max_qubits, int instances,
         const std::vector<std::string>& fom_ids) {
        BundleConfig cfg;
        if (!fom_ids.empty()) {
          cfg.fom_ids = fom_ids;
        }
        cfg.rl.seed = seed;
        cfg.rl.iterations = iterations;
        cfg.train_spec.seed = seed;
        cfg.train_spec.min_qubits = min_qubits;
        cfg.train_spec.max_qubits = max_qubits;
        cfg.train_spec.instances_per_size = instances;
        train_bundle(default_fleet(), cfg, out_dir, nullptr);
        return out_dir;
      },
      py::arg("out_dir"), py::arg("seed") = 1, py::arg("iterations") = 150,
      py::arg("min_qubits") = 2, py::arg("max_qubits") = 8,
      py::arg("instances") = 2,
      py::arg("fom_ids") = std::vector<std::string>{},
      "Train (or resume) a predictor bundle for the default fleet.");

  py::class_<PredictorBundle>(m, "Bundle")
      .def(py::init([](const std::string& dir) { return load_bundle(dir); }),
           py::arg("dir"))
      .def("devices",
           [](const PredictorBundle& b) {
             py::list out;
             for (const auto& d : b.fleet) {
               out.append(device_dict(d));
             }
             return out;
           })
      .def(
          "predict",
          [](const PredictorBundle& b, const Circuit& c,
             const std::string& fom_id) {
            return predict_device(c, b.forest_for(fom_id));
          },
          py::arg("circuit"), py::arg("fom") = "expected_fidelity",
          "Ranked (device, vote share) list; no compilation happens.")
      .def(
          "predict_and_compile",
          [](const PredictorBundle& b, const Circuit& c,
             const std::string& fom_id) {
            return outcome_dict(predict_and_compile(c, b, fom_id));
          },
          py::arg("circuit"), py::arg("fom") = "expected_fidelity",
          "Pick the most promising device and compile for it.")
      .def(
          "compile",
          [](const PredictorBundle& b, const Circuit& c,
             const std::string& device_id, const std::string& fom_id) {
            const auto& device = b.device(device_id);
            const auto result =
                compile_with_policy(c, b.policy_for(fom_id, device_id), device);
            CompileOutcome outcome;
            outcome.device_id = device_id;
            outcome.circuit = result.circuit;
            outcome.mapping = result.mapping;
            outcome.pass_log = result.pass_log;
            outcome.score = result.score;
            outcome.used_fallback = result.used_fallback;
            return outcome_dict(outcome);
          },
          py::arg("circuit"), py::arg("device"),
          py::arg("fom") = "expected_fidelity",
          "Compile for a specific device with its trained policy.");

  py::class_<Circuit>(m, "Circuit")
      .def("__repr__", [](const Circuit& c) {
        return "<qcomp.Circuit qubits=" + std::to_string(c.num_qubits) +
               " ops=" + std::to_string(c.ops.size()) + ">";
      });

  m.def("pass_catalog", [] {
    py::list out;
    for (const auto& action : pass_catalog()) {
      out.append(py::make_tuple(action.id, pass_kind_name(action.kind)));
    }
    return out;
  });
  m.attr("catalog_version") = catalog_version();
}
