// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/features.hpp"

#include "qcomp/metrics.hpp"
#include "qcomp/rng.hpp"

#include <algorithm>
#include <set>

namespace qcomp {

std::vector<double> FeatureVector::to_vector() const {
  std::vector<double> v;
  v.reserve(kNumFeatures);
  v.push_back(static_cast<double>(num_qubits));
  v.push_back(static_cast<double>(depth));
  v.push_back(program_communication);
  v.push_back(critical_depth_ratio);
  v.push_back(entanglement_ratio);
  v.push_back(parallelism);
  v.push_back(liveness);
  for (const auto count : gate_counts) {
    v.push_back(static_cast<double>(count));
  }
  return v;
}

FeatureVector extract_features(const Circuit& c) {
  FeatureVector f;
  f.num_qubits = c.num_qubits;
  const auto metrics = compute_metrics(c);
  f.depth = metrics.depth;
  f.gate_counts = metrics.gate_counts;

  const auto n = static_cast<double>(c.num_qubits);

  std::set<std::pair<std::uint32_t, std::uint32_t>> interactions;
  for (const auto& op : c.ops) {
    if (is_two_qubit(op.gate)) {
      interactions.emplace(std::min(op.q0, op.q1), std::max(op.q0, op.q1));
    }
  }
  if (c.num_qubits > 1) {
    f.program_communication =
        2.0 * static_cast<double>(interactions.size()) / (n * (n - 1.0));
  }

  if (metrics.two_qubit_count > 0) {
    f.critical_depth_ratio =
        static_cast<double>(metrics.critical_path_two_qubit_count) /
        static_cast<double>(metrics.two_qubit_count);
  }
  if (!c.ops.empty()) {
    f.entanglement_ratio = static_cast<double>(metrics.two_qubit_count) /
                           static_cast<double>(c.ops.size());
  }

  const auto sched = compute_schedule(c);
  const auto scheduled =
      static_cast<double>(c.ops.size() + c.measurements.size());
  if (c.num_qubits > 1 && sched.depth > 0) {
    const double raw =
        (scheduled / static_cast<double>(sched.depth) - 1.0) / (n - 1.0);
    f.parallelism = std::clamp(raw, 0.0, 1.0);
  }
  if (sched.depth > 0 && c.num_qubits > 0) {
    std::vector<std::vector<bool>> active(
        c.num_qubits, std::vector<bool>(sched.depth, false));
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
      const auto& op = c.ops[i];
      active[op.q0][sched.op_layer[i]] = true;
      if (is_two_qubit(op.gate)) {
        active[op.q1][sched.op_layer[i]] = true;
      }
    }
    for (std::size_t j = 0; j < c.measurements.size(); ++j) {
      active[c.measurements[j].qubit][sched.measurement_layer[j]] = true;
    }
    std::size_t live = 0;
    for (const auto& row : active) {
      live += static_cast<std::size_t>(
          std::count(row.begin(), row.end(), true));
    }
    f.liveness = static_cast<double>(live) /
                 (n * static_cast<double>(sched.depth));
  }
  return f;
}

std::vector<std::string> feature_names() {
  std::vector<std::string> names{
      "num_qubits",    "depth",       "program_communication",
      "critical_depth", "entanglement_ratio", "parallelism",
      "liveness",
  };
  for (std::size_t g = 0; g < kNumGates; ++g) {
    names.push_back("count_" +
                    std::string(gate_info(static_cast<Gate>(g)).name));
  }
  return names;
}

const std::string& feature_schema_hash() {
  static const std::string hash = [] {
    std::string text = "features-v1;";
    for (const auto& name : feature_names()) {
      text += name + ";";
    }
    return to_hex(fnv1a64(text));
  }();
  return hash;
}

} // namespace qcomp
