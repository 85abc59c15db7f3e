// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/passes.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qcomp {

namespace {

// Applies a wire assignment. First layout: widens the circuit to the device
// and records the logical->physical map. Later layouts: composes a full
// permutation into the accumulated one.
PassResult apply_assignment(const Circuit& c, const DeviceModel& d,
                            const MappingState& ms,
                            const std::vector<std::uint32_t>& assignment) {
  PassResult result;
  result.mapping = ms;
  result.circuit = c;
  result.circuit.num_qubits = d.num_qubits;
  for (auto& op : result.circuit.ops) {
    op.q0 = assignment[op.q0];
    op.q1 = is_two_qubit(op.gate) ? assignment[op.q1] : op.q0;
  }
  for (auto& m : result.circuit.measurements) {
    m.qubit = assignment[m.qubit];
  }
  if (!ms.has_layout()) {
    result.mapping.layout =
        std::vector<std::uint32_t>(assignment.begin(),
                                   assignment.begin() + c.num_qubits);
    result.mapping.routing_permutation.resize(d.num_qubits);
    for (std::uint32_t w = 0; w < d.num_qubits; ++w) {
      result.mapping.routing_permutation[w] = w;
    }
  } else {
    result.mapping.push_permutation(assignment);
  }
  return result;
}

// Extends a partial wire->physical map to a total injective assignment.
// Unassigned wires get the free physical qubit closest to their already
// placed interaction partners (ties by index), idle wires the lowest free.
std::vector<std::uint32_t>
complete_assignment(std::map<std::uint32_t, std::uint32_t> placed,
                    std::uint32_t num_wires, const DeviceModel& d,
                    const std::map<std::uint32_t, std::set<std::uint32_t>>&
                        partners) {
  std::vector<bool> used(d.num_qubits, false);
  for (const auto& [wire, phys] : placed) {
    used[phys] = true;
  }
  const auto& dist = d.distances();
  for (std::uint32_t wire = 0; wire < num_wires; ++wire) {
    if (placed.count(wire) != 0) {
      continue;
    }
    std::uint32_t best = UINT32_MAX;
    std::uint64_t best_cost = UINT64_MAX;
    for (std::uint32_t phys = 0; phys < d.num_qubits; ++phys) {
      if (used[phys]) {
        continue;
      }
      std::uint64_t cost = 0;
      const auto it = partners.find(wire);
      if (it != partners.end()) {
        for (const auto partner : it->second) {
          const auto placed_it = placed.find(partner);
          if (placed_it != placed.end()) {
            const auto hops = dist[phys][placed_it->second];
            cost += hops == UINT32_MAX ? 1000000 : hops;
          }
        }
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = phys;
      }
    }
    placed[wire] = best;
    used[best] = true;
  }
  std::vector<std::uint32_t> assignment(num_wires);
  for (std::uint32_t wire = 0; wire < num_wires; ++wire) {
    assignment[wire] = placed.at(wire);
  }
  return assignment;
}

void check_fits(const Circuit& c, const DeviceModel& d,
                const MappingState& ms) {
  const std::uint32_t width = ms.has_layout() ? d.num_qubits : c.num_qubits;
  if (width > d.num_qubits) {
    throw PassError("circuit with " + std::to_string(c.num_qubits) +
                    " qubits does not fit device '" + d.id + "' (" +
                    std::to_string(d.num_qubits) + " qubits)");
  }
}

// Interaction graph restricted to wires in use; multiplicity counted.
std::map<QubitPair, std::size_t> interaction_counts(const Circuit& c) {
  std::map<QubitPair, std::size_t> counts;
  for (const auto& op : c.ops) {
    if (is_two_qubit(op.gate)) {
      ++counts[normalized_pair(op.q0, op.q1)];
    }
  }
  return counts;
}

std::map<std::uint32_t, std::set<std::uint32_t>>
interaction_partners(const Circuit& c) {
  std::map<std::uint32_t, std::set<std::uint32_t>> partners;
  for (const auto& op : c.ops) {
    if (is_two_qubit(op.gate)) {
      partners[op.q0].insert(op.q1);
      partners[op.q1].insert(op.q0);
    }
  }
  return partners;
}

} // namespace

PassResult layout_trivial(const Circuit& c, const DeviceModel& d,
                          const MappingState& ms) {
  check_fits(c, d, ms);
  const std::uint32_t width = ms.has_layout() ? d.num_qubits : c.num_qubits;
  std::vector<std::uint32_t> assignment(width);
  for (std::uint32_t w = 0; w < width; ++w) {
    assignment[w] = w;
  }
  return apply_assignment(c, d, ms, assignment);
}

PassResult layout_dense(const Circuit& c, const DeviceModel& d,
                        const MappingState& ms) {
  check_fits(c, d, ms);
  const std::uint32_t width = ms.has_layout() ? d.num_qubits : c.num_qubits;

  // Grow a connected region of maximal total degree, then assign wires in
  // index order along the growth order.
  std::vector<std::uint32_t> region;
  std::vector<bool> in_region(d.num_qubits, false);
  const auto pick_best = [&](const std::set<std::uint32_t>& candidates) {
    std::uint32_t best = UINT32_MAX;
    std::uint32_t best_degree = 0;
    for (const auto q : candidates) {
      const auto deg = d.degree(q);
      if (best == UINT32_MAX || deg > best_degree ||
          (deg == best_degree && q < best)) {
        best = q;
        best_degree = deg;
      }
    }
    return best;
  };
  {
    std::set<std::uint32_t> all;
    for (std::uint32_t q = 0; q < d.num_qubits; ++q) {
      all.insert(q);
    }
    const auto start = pick_best(all);
    region.push_back(start);
    in_region[start] = true;
  }
  while (region.size() < width) {
    std::set<std::uint32_t> frontier;
    for (const auto q : region) {
      for (const auto nb : d.adjacency()[q]) {
        if (!in_region[nb]) {
          frontier.insert(nb);
        }
      }
    }
    if (frontier.empty()) { // disconnected device; fall back to lowest free
      for (std::uint32_t q = 0; q < d.num_qubits; ++q) {
        if (!in_region[q]) {
          frontier.insert(q);
          break;
        }
      }
    }
    const auto next = pick_best(frontier);
    region.push_back(next);
    in_region[next] = true;
  }

  std::vector<std::uint32_t> assignment(width);
  for (std::uint32_t w = 0; w < width; ++w) {
    assignment[w] = region[w];
  }
  return apply_assignment(c, d, ms, assignment);
}

PassResult layout_interaction(const Circuit& c, const DeviceModel& d,
                              const MappingState& ms) {
  check_fits(c, d, ms);
  const std::uint32_t width = ms.has_layout() ? d.num_qubits : c.num_qubits;

  // Pairs by descending interaction count, then index order.
  const auto counts = interaction_counts(c);
  std::vector<std::pair<QubitPair, std::size_t>> pairs(counts.begin(),
                                                       counts.end());
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });

  std::map<std::uint32_t, std::uint32_t> placed;
  std::vector<bool> used(d.num_qubits, false);
  const auto place = [&](std::uint32_t wire, std::uint32_t phys) {
    placed[wire] = phys;
    used[phys] = true;
  };

  for (const auto& [pair, count] : pairs) {
    const auto [u, v] = pair;
    const bool u_placed = placed.count(u) != 0;
    const bool v_placed = placed.count(v) != 0;
    if (u_placed && v_placed) {
      continue;
    }
    if (!u_placed && !v_placed) {
      // Free coupled physical pair with the largest combined degree.
      std::uint32_t best_a = UINT32_MAX;
      std::uint32_t best_b = UINT32_MAX;
      std::uint32_t best_score = 0;
      for (const auto& [a, b] : d.coupling) {
        if (used[a] || used[b]) {
          continue;
        }
        const auto score = d.degree(a) + d.degree(b);
        if (best_a == UINT32_MAX || score > best_score) {
          best_a = a;
          best_b = b;
          best_score = score;
        }
      }
      if (best_a != UINT32_MAX) {
        place(u, best_a);
        place(v, best_b);
      }
      continue;
    }
    const auto anchor = placed.at(u_placed ? u : v);
    const auto wire = u_placed ? v : u;
    std::uint32_t best = UINT32_MAX;
    std::uint32_t best_degree = 0;
    for (const auto nb : d.adjacency()[anchor]) {
      if (used[nb]) {
        continue;
      }
      const auto deg = d.degree(nb);
      if (best == UINT32_MAX || deg > best_degree ||
          (deg == best_degree && nb < best)) {
        best = nb;
        best_degree = deg;
      }
    }
    if (best != UINT32_MAX) {
      place(wire, best);
    } // otherwise left for the fill stage, near its partners
  }

  const auto assignment =
      complete_assignment(placed, width, d, interaction_partners(c));
  return apply_assignment(c, d, ms, assignment);
}

} // namespace qcomp
