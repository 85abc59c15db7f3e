// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_SIM_HPP
#define QCOMP_SIM_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/mapping.hpp"

#include <complex>
#include <vector>

namespace qcomp {

inline constexpr std::uint32_t kSimulatorQubitCap = 12;

class SimulatorCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Applies each op's unitary to |0...0> in op order. Qubit i is bit i of the
/// basis index. Measurements must have been stripped by the caller.
std::vector<std::complex<double>>
simulate_statevector(const Circuit& c,
                     std::uint32_t qubit_cap = kSimulatorQubitCap);

/// 2x2 unitary of a single-qubit gate; 4x4 (row-major, basis q1 q0) of a
/// two-qubit one. Exposed for decomposition-identity tests.
std::vector<std::vector<std::complex<double>>> gate_matrix(Gate g,
                                                           double param);

/// Checks that `compiled` (possibly over a wider physical register) realizes
/// `original` once the mapping's final qubit placement is accounted for.
/// States must agree up to a global phase; on qubits both circuits measure,
/// an extra diagonal phase per measured-bit assignment is allowed, which is
/// exactly the freedom measurement-commuting rewrites may use.
/// Only the wires actually touched by `compiled` are simulated; if those
/// exceed the cap, SimulatorCapExceeded is thrown.
bool equivalent_up_to_layout(const Circuit& original, const Circuit& compiled,
                             const MappingState& mapping,
                             double tolerance = 1e-8,
                             std::uint32_t qubit_cap = kSimulatorQubitCap);

} // namespace qcomp

#endif
