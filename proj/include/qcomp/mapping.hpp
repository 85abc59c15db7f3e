// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_MAPPING_HPP
#define QCOMP_MAPPING_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace qcomp {

/// Layout/routing bookkeeping carried through a compilation episode.
///
/// `layout[l]` is the physical wire assigned to logical qubit l by the first
/// layout pass. `routing_permutation` is the permutation on physical wires
/// accumulated afterwards (routing SWAPs, re-layouts): the state initially
/// placed on wire w ends on wire routing_permutation[w]. The final position
/// of logical qubit l is therefore routing_permutation[layout[l]].
struct MappingState {
  std::optional<std::vector<std::uint32_t>> layout;
  std::vector<std::uint32_t> routing_permutation;
  std::uint64_t seed = 0;

  bool has_layout() const { return layout.has_value(); }

  std::uint32_t final_position(std::uint32_t logical) const {
    const std::uint32_t wire = layout ? (*layout)[logical] : logical;
    if (wire < routing_permutation.size()) {
      return routing_permutation[wire];
    }
    return wire;
  }

  /// Composes `perm` (a permutation on physical wires) on top of the
  /// accumulated one.
  void push_permutation(const std::vector<std::uint32_t>& perm) {
    if (routing_permutation.empty()) {
      routing_permutation = perm;
      return;
    }
    for (auto& w : routing_permutation) {
      w = perm[w];
    }
  }
};

} // namespace qcomp

#endif
