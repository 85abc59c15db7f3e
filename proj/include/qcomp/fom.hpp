// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_FOM_HPP
#define QCOMP_FOM_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/mapping.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qcomp {

struct ExpectedFidelityReport {
  double total = 0.0;
  std::vector<std::pair<GateOp, double>> per_gate;
  std::vector<std::pair<std::uint32_t, double>> per_readout;
  /// Empty when the circuit was scored; otherwise why the score is 0.
  std::string reason;
};

struct FidelityOptions {
  /// Treat rz as a virtual (error-free) gate instead of charging the
  /// single-qubit calibration entry. Off by default: the score multiplies a
  /// fidelity for every gate.
  bool virtual_rz = false;
};

/// Product of per-gate and per-readout calibration fidelities, accumulated
/// in the log domain. Circuits that do not fit or are not executable on the
/// device score 0 with a reason instead of raising.
ExpectedFidelityReport expected_fidelity(const Circuit& c,
                                         const DeviceModel& d,
                                         const MappingState& ms,
                                         const FidelityOptions& options = {});

/// 1 - (two-qubit gates on a depth-achieving path / all two-qubit gates);
/// 1 by convention when there are no two-qubit gates. Higher means more
/// parallel.
double critical_depth_score(const Circuit& c);

struct FigureOfMerit {
  std::string id;
  std::function<double(const Circuit&, const DeviceModel&,
                       const MappingState&)>
      score;
};

FigureOfMerit fidelity_fom();
FigureOfMerit critical_depth_fom();

/// Normalized nonnegative weights over FoM ids ("expected_fidelity",
/// "critical_depth"); throws std::invalid_argument unless they sum to 1
/// within 1e-9.
FigureOfMerit weighted_combination(const std::map<std::string, double>& weights);

/// Accepts "expected_fidelity", "critical_depth", or "combined:<w>:<w>".
FigureOfMerit make_fom(const std::string& id);

} // namespace qcomp

#endif
