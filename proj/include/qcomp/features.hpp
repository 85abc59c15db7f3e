// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_FEATURES_HPP
#define QCOMP_FEATURES_HPP

#include "qcomp/circuit.hpp"

#include <array>
#include <string>
#include <vector>

namespace qcomp {

/// Circuit descriptor: qubit count, depth, the five composite features
/// (each in [0,1]) and the per-gate histogram.
///
/// Composite definitions, frozen into the schema hash:
///  - program_communication: interaction-graph degree sum / (n(n-1)), the
///    graph having an edge where at least one two-qubit gate acts;
///  - critical_depth_ratio: two-qubit gates on a depth-achieving dependency
///    path / all two-qubit gates;
///  - entanglement_ratio: two-qubit gates / all gates;
///  - parallelism: ((ops/depth) - 1)/(n - 1), clamped to [0,1], counting
///    measurements as scheduled ops;
///  - liveness: sum over qubits of layers the qubit is active in / (n*depth).
struct FeatureVector {
  std::uint32_t num_qubits = 0;
  std::size_t depth = 0;
  double program_communication = 0.0;
  double critical_depth_ratio = 0.0;
  double entanglement_ratio = 0.0;
  double parallelism = 0.0;
  double liveness = 0.0;
  std::array<std::size_t, kNumGates> gate_counts{};

  /// Fixed order: the seven numeric features, then the histogram.
  std::vector<double> to_vector() const;
};

inline constexpr std::size_t kNumFeatures = 7 + kNumGates;

FeatureVector extract_features(const Circuit& c);

std::vector<std::string> feature_names();

/// Hash of feature names and formula version; stored in forest files.
const std::string& feature_schema_hash();

} // namespace qcomp

#endif
