// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_METRICS_HPP
#define QCOMP_METRICS_HPP

#include "qcomp/circuit.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace qcomp {

struct CircuitMetrics {
  /// ASAP-layered depth; measurements count as depth-1 operations.
  std::size_t depth = 0;
  std::array<std::size_t, kNumGates> gate_counts{};
  std::size_t two_qubit_count = 0;
  /// Maximum number of two-qubit gates over all dependency paths that
  /// achieve the depth.
  std::size_t critical_path_two_qubit_count = 0;
};

/// Greedy ASAP schedule. layer[i] is the 0-based layer of ops[i];
/// measurement_layer[j] the layer of measurements[j]; depth = max + 1.
struct Schedule {
  std::vector<std::size_t> op_layer;
  std::vector<std::size_t> measurement_layer;
  std::size_t depth = 0;
};

Schedule compute_schedule(const Circuit& c);

CircuitMetrics compute_metrics(const Circuit& c);

} // namespace qcomp

#endif
