// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/metrics.hpp"

#include <algorithm>

namespace qcomp {

namespace {

// Unified node view: ops first, then measurements (both occupy layers).
struct Node {
  std::uint32_t q0;
  std::uint32_t q1; // == q0 for single-qubit nodes
  bool two_qubit;
};

std::vector<Node> nodes_of(const Circuit& c) {
  std::vector<Node> nodes;
  nodes.reserve(c.ops.size() + c.measurements.size());
  for (const auto& op : c.ops) {
    const bool two = is_two_qubit(op.gate);
    nodes.push_back(Node{op.q0, two ? op.q1 : op.q0, two});
  }
  for (const auto& m : c.measurements) {
    nodes.push_back(Node{m.qubit, m.qubit, false});
  }
  return nodes;
}

} // namespace

Schedule compute_schedule(const Circuit& c) {
  Schedule sched;
  sched.op_layer.resize(c.ops.size());
  sched.measurement_layer.resize(c.measurements.size());
  std::vector<std::size_t> qubit_front(c.num_qubits, 0); // next free layer
  const auto nodes = nodes_of(c);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    std::size_t layer = qubit_front[n.q0];
    if (n.two_qubit) {
      layer = std::max(layer, qubit_front[n.q1]);
    }
    qubit_front[n.q0] = layer + 1;
    if (n.two_qubit) {
      qubit_front[n.q1] = layer + 1;
    }
    if (i < c.ops.size()) {
      sched.op_layer[i] = layer;
    } else {
      sched.measurement_layer[i - c.ops.size()] = layer;
    }
    sched.depth = std::max(sched.depth, layer + 1);
  }
  return sched;
}

CircuitMetrics compute_metrics(const Circuit& c) {
  CircuitMetrics m;
  for (const auto& op : c.ops) {
    ++m.gate_counts[static_cast<std::size_t>(op.gate)];
    if (is_two_qubit(op.gate)) {
      ++m.two_qubit_count;
    }
  }

  const auto nodes = nodes_of(c);
  if (nodes.empty()) {
    return m;
  }

  // fwd[i]: longest dependency path (node count) ending at node i.
  // bwd[i]: longest path starting at i. A node lies on a depth-achieving
  // path iff fwd + bwd - 1 == depth.
  const std::size_t n = nodes.size();
  std::vector<std::size_t> fwd(n, 1);
  std::vector<std::size_t> bwd(n, 1);
  std::vector<std::vector<std::size_t>> preds(n);
  {
    std::vector<std::size_t> last(c.num_qubits, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& node = nodes[i];
      for (const std::uint32_t q : {node.q0, node.q1}) {
        if (last[q] != SIZE_MAX) {
          auto& p = preds[i];
          if (std::find(p.begin(), p.end(), last[q]) == p.end()) {
            p.push_back(last[q]);
          }
        }
        if (!node.two_qubit) {
          break;
        }
      }
      last[node.q0] = i;
      if (node.two_qubit) {
        last[node.q1] = i;
      }
    }
  }
  std::size_t depth = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto p : preds[i]) {
      fwd[i] = std::max(fwd[i], fwd[p] + 1);
    }
    depth = std::max(depth, fwd[i]);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (const auto p : preds[i]) {
      bwd[p] = std::max(bwd[p], bwd[i] + 1);
    }
  }
  m.depth = depth;

  // Max two-qubit count along one depth-achieving path: DP restricted to the
  // critical subgraph (edges that advance fwd by exactly one).
  std::vector<std::size_t> best(n, 0);
  std::size_t answer = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fwd[i] + bwd[i] - 1 != depth) {
      continue;
    }
    std::size_t from_preds = 0;
    for (const auto p : preds[i]) {
      if (fwd[p] + 1 == fwd[i] && fwd[p] + bwd[p] - 1 == depth) {
        from_preds = std::max(from_preds, best[p]);
      }
    }
    best[i] = from_preds + (nodes[i].two_qubit ? 1 : 0);
    if (fwd[i] == depth) {
      answer = std::max(answer, best[i]);
    }
  }
  m.critical_path_two_qubit_count = answer;
  return m;
}

} // namespace qcomp
