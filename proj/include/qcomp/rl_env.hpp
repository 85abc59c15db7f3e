// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_RL_ENV_HPP
#define QCOMP_RL_ENV_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/fom.hpp"
#include "qcomp/mapping.hpp"
#include "qcomp/passes.hpp"

#include <vector>

namespace qcomp {

/// Where a circuit stands on the way to being executable. respects_topology
/// is only ever reported true when only_native also holds; the fourth
/// combination does not occur.
struct CompilationStatus {
  bool only_native = false;
  bool respects_topology = false;

  bool executable() const { return only_native && respects_topology; }

  friend bool operator==(const CompilationStatus&,
                         const CompilationStatus&) = default;
};

/// Single traversal of the ops.
CompilationStatus compute_status(const Circuit& c, const DeviceModel& d,
                                 const MappingState& ms);

class EpisodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One compilation episode over the three-state MDP. Rewards are sparse:
/// zero everywhere except at termination (explicit `terminate` or the step
/// cap), where the figure of merit of the current circuit is paid out.
struct Episode {
  Circuit circuit;
  const DeviceModel* device = nullptr;
  MappingState mapping;
  CompilationStatus status;
  FigureOfMerit fom;
  int steps_taken = 0;
  int max_steps = 40;
  bool done = false;
};

Episode make_episode(const Circuit& c, const DeviceModel& d,
                     const FigureOfMerit& fom, std::uint64_t seed,
                     int max_steps = 40);

/// Legal actions in the current state, indexed like pass_catalog():
///  - non-native: synthesis and general optimization;
///  - native, unmapped: layout, combined mapping, routing (once a layout
///    exists), and both optimization kinds;
///  - executable: optimization kinds and terminate.
std::vector<bool> action_mask(const Episode& e);

/// Applies an unmasked action and returns the reward.
double step(Episode& e, std::size_t action_index);

} // namespace qcomp

#endif
