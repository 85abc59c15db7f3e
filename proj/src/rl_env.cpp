// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/rl_env.hpp"

namespace qcomp {

CompilationStatus compute_status(const Circuit& c, const DeviceModel& d,
                                 const MappingState& ms) {
  CompilationStatus status;
  status.only_native = true;
  bool pairs_ok = true;
  for (const auto& op : c.ops) {
    if (!d.is_native(op.gate)) {
      status.only_native = false;
      break;
    }
    if (is_two_qubit(op.gate) && !d.coupled(op.q0, op.q1)) {
      pairs_ok = false;
    }
  }
  status.respects_topology =
      status.only_native && ms.has_layout() && pairs_ok;
  return status;
}

Episode make_episode(const Circuit& c, const DeviceModel& d,
                     const FigureOfMerit& fom, std::uint64_t seed,
                     int max_steps) {
  if (c.num_qubits > d.num_qubits) {
    throw EpisodeError("circuit with " + std::to_string(c.num_qubits) +
                       " qubits does not fit device '" + d.id + "'");
  }
  Episode e;
  e.circuit = c;
  e.device = &d;
  e.mapping.seed = seed;
  e.fom = fom;
  e.max_steps = max_steps;
  e.status = compute_status(e.circuit, d, e.mapping);
  return e;
}

std::vector<bool> action_mask(const Episode& e) {
  if (e.done) {
    throw EpisodeError("episode is already done");
  }
  const auto& catalog = pass_catalog();
  std::vector<bool> mask(catalog.size(), false);
  const bool native = e.status.only_native;
  const bool executable = e.status.executable();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    switch (catalog[i].kind) {
    case PassKind::Synthesis:
      mask[i] = !native;
      break;
    case PassKind::Layout:
      // One explicit layout per mapping attempt; combined mapping and
      // routing own the permutation afterwards.
      mask[i] = native && !executable && !e.mapping.has_layout();
      break;
    case PassKind::Routing:
      mask[i] = native && !executable && e.mapping.has_layout();
      break;
    case PassKind::CombinedMapping:
      mask[i] = native && !executable;
      break;
    case PassKind::OptPreserving:
      mask[i] = native;
      break;
    case PassKind::OptGeneral:
      mask[i] = true;
      break;
    case PassKind::Terminate:
      mask[i] = executable;
      break;
    }
  }
  return mask;
}

double step(Episode& e, std::size_t action_index) {
  const auto mask = action_mask(e);
  if (action_index >= mask.size() || !mask[action_index]) {
    throw EpisodeError("action '" +
                       pass_catalog().at(action_index).id +
                       "' is masked in the current state");
  }
  const auto& action = pass_catalog()[action_index];
  ++e.steps_taken;
  if (action.kind == PassKind::Terminate) {
    e.done = true;
    return e.fom.score(e.circuit, *e.device, e.mapping);
  }
  auto result = action.apply(e.circuit, *e.device, e.mapping);
  e.circuit = std::move(result.circuit);
  e.mapping = std::move(result.mapping);
  e.status = compute_status(e.circuit, *e.device, e.mapping);
  if (e.steps_taken >= e.max_steps) {
    e.done = true;
    if (e.status.executable()) {
      return e.fom.score(e.circuit, *e.device, e.mapping);
    }
    return 0.0;
  }
  return 0.0;
}

} // namespace qcomp
