// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_PASSES_HPP
#define QCOMP_PASSES_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/mapping.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qcomp {

class PassError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class PassKind {
  Synthesis,
  Layout,
  Routing,
  CombinedMapping,
  OptPreserving,
  OptGeneral,
  Terminate,
};

std::string pass_kind_name(PassKind kind);

struct PassResult {
  Circuit circuit;
  MappingState mapping;
};

// ---- synthesis ----

/// Rule-based rewriting into the device's native set, applied to fixpoint.
/// Throws PassError if some gate has no decomposition chain into the set.
Circuit synthesize_to_native(const Circuit& c, const DeviceModel& d);

// ---- layout ----
// Layout passes remap the circuit onto physical wires (widening it to the
// device size on first application) and record the assignment in the
// MappingState. Re-application composes into the running permutation.

PassResult layout_trivial(const Circuit& c, const DeviceModel& d,
                          const MappingState& ms);
/// Greedy maximum-total-degree connected subgraph.
PassResult layout_dense(const Circuit& c, const DeviceModel& d,
                        const MappingState& ms);
/// Greedy placement of the most-interacting logical pairs onto coupled
/// physical pairs.
PassResult layout_interaction(const Circuit& c, const DeviceModel& d,
                              const MappingState& ms);

// ---- routing ----
// Requires a layout. Every two-qubit gate of the output acts on a coupled
// pair; inserted SWAPs are emitted in the device's native gates and the
// accumulated wire permutation is recorded in the MappingState.

PassResult route_basic(const Circuit& c, const DeviceModel& d,
                       const MappingState& ms);
/// Runs k seeded shortest-path variants and keeps the fewest-SWAP result.
PassResult route_stochastic(const Circuit& c, const DeviceModel& d,
                            const MappingState& ms, int candidates = 8);
/// Front-layer + lookahead-window distance heuristic.
PassResult route_lookahead(const Circuit& c, const DeviceModel& d,
                           const MappingState& ms);

// ---- optimization ----
// All passes preserve the realized unitary (remove_diag_before_measure up to
// phases on measured qubits) and never increase the gate count, except
// consolidate_2q_blocks which may reshape counts.

Circuit cancel_inverses(const Circuit& c);
Circuit merge_rotations(const Circuit& c);
Circuit drop_identity_rotations(const Circuit& c, double epsilon = 1e-10);
Circuit commute_cancel(const Circuit& c);
Circuit remove_diag_before_measure(const Circuit& c);
/// Peephole rewriting of adjacent same-pair two-qubit runs; may introduce
/// SWAP gates (and thereby leave the native set).
Circuit consolidate_2q_blocks(const Circuit& c, const DeviceModel& d);

/// One round of every gate-set-preserving pass, repeated to fixpoint.
Circuit opt_preserving_sweep(const Circuit& c);

// ---- catalog ----

struct PassAction {
  std::string id;
  PassKind kind;
  /// Deterministic given ms.seed; identity for `terminate`.
  std::function<PassResult(const Circuit&, const DeviceModel&,
                           const MappingState&)>
      apply;
};

const std::vector<PassAction>& pass_catalog();
std::size_t pass_index(const std::string& id);
/// Hash over the catalog's ids and kinds; stored in policy files.
const std::string& catalog_version();

// ---- fixed baselines ----

enum class BaselineLevel { L1, L2 };

/// Fixed pass sequences standing in for a pre-configured SDK compilation
/// flow. L1: synthesize, trivial layout, basic routing, inverse
/// cancellation. L2: rotation merging, synthesize, interaction layout,
/// lookahead routing, preserving sweep to fixpoint.
PassResult baseline_pipeline(const Circuit& c, const DeviceModel& d,
                             BaselineLevel level);

} // namespace qcomp

#endif
