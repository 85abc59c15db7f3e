// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_CIRCUIT_HPP
#define QCOMP_CIRCUIT_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcomp {

/// Supported gate vocabulary (the qelib1 subset handled by the toolchain).
/// The enumeration order is fixed: it defines the gate-count histogram layout
/// and must not be reordered.
enum class Gate : std::uint8_t {
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  Sx,
  Rx,
  Ry,
  Rz,
  Cx,
  Cz,
  Swap,
  Rxx,
};

inline constexpr std::size_t kNumGates = 16;

struct GateInfo {
  std::string_view name;
  int num_qubits;
  int num_params;
};

const GateInfo& gate_info(Gate g);

/// Returns the gate for a qelib1 name, or throws std::invalid_argument.
Gate gate_from_name(std::string_view name);
bool is_gate_name(std::string_view name);

inline bool is_two_qubit(Gate g) { return gate_info(g).num_qubits == 2; }
inline bool is_parameterized(Gate g) { return gate_info(g).num_params == 1; }

/// Diagonal in the computational basis (commutes with Z-measurement).
bool is_diagonal(Gate g);
/// Self-inverse regardless of qubit order.
bool is_self_inverse(Gate g);

/// One gate application. `param` is meaningful only for parameterized gates
/// and is an angle in radians. Two-qubit gates use (q0, q1) = (control,
/// target) where the distinction matters (cx); cz/swap/rxx are symmetric.
struct GateOp {
  Gate gate{};
  double param = 0.0;
  std::uint32_t q0 = 0;
  std::uint32_t q1 = 0;

  int num_qubits() const { return gate_info(gate).num_qubits; }
  bool acts_on(std::uint32_t q) const {
    return q0 == q || (num_qubits() == 2 && q1 == q);
  }
  bool same_qubits(const GateOp& other) const;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

GateOp make_op(Gate g, std::uint32_t q);
GateOp make_op(Gate g, std::uint32_t q0, std::uint32_t q1);
GateOp make_op(Gate g, double param, std::uint32_t q);
GateOp make_op(Gate g, double param, std::uint32_t q0, std::uint32_t q1);

struct Measurement {
  std::uint32_t qubit = 0;
  std::uint32_t cbit = 0;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Circuit IR: an ordered gate list over a flat qubit index space, followed by
/// terminal measurements. Instances are immutable by convention once built;
/// passes return fresh circuits.
struct Circuit {
  std::uint32_t num_qubits = 0;
  std::vector<GateOp> ops;
  std::vector<Measurement> measurements;

  /// Throws ValidationError on out-of-range indices, repeated qubits in a
  /// multi-qubit op, or non-finite parameters.
  void validate() const;

  std::size_t two_qubit_count() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Content hash over the exact op/measurement sequence (order-sensitive).
std::uint64_t circuit_hash(const Circuit& c);

} // namespace qcomp

#endif
