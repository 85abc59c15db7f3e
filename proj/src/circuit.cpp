// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/circuit.hpp"

#include "qcomp/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace qcomp {

namespace {

constexpr std::array<GateInfo, kNumGates> kGateTable{{
    {"x", 1, 0},
    {"y", 1, 0},
    {"z", 1, 0},
    {"h", 1, 0},
    {"s", 1, 0},
    {"sdg", 1, 0},
    {"t", 1, 0},
    {"tdg", 1, 0},
    {"sx", 1, 0},
    {"rx", 1, 1},
    {"ry", 1, 1},
    {"rz", 1, 1},
    {"cx", 2, 0},
    {"cz", 2, 0},
    {"swap", 2, 0},
    {"rxx", 2, 1},
}};

} // namespace

const GateInfo& gate_info(Gate g) {
  return kGateTable[static_cast<std::size_t>(g)];
}

Gate gate_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kGateTable.size(); ++i) {
    if (kGateTable[i].name == name) {
      return static_cast<Gate>(i);
    }
  }
  throw std::invalid_argument("unknown gate name: " + std::string(name));
}

bool is_gate_name(std::string_view name) {
  for (const auto& info : kGateTable) {
    if (info.name == name) {
      return true;
    }
  }
  return false;
}

bool is_diagonal(Gate g) {
  switch (g) {
  case Gate::Z:
  case Gate::S:
  case Gate::Sdg:
  case Gate::T:
  case Gate::Tdg:
  case Gate::Rz:
  case Gate::Cz:
    return true;
  default:
    return false;
  }
}

bool is_self_inverse(Gate g) {
  switch (g) {
  case Gate::X:
  case Gate::Y:
  case Gate::Z:
  case Gate::H:
  case Gate::Cx:
  case Gate::Cz:
  case Gate::Swap:
    return true;
  default:
    return false;
  }
}

bool GateOp::same_qubits(const GateOp& other) const {
  if (num_qubits() != other.num_qubits()) {
    return false;
  }
  if (num_qubits() == 1) {
    return q0 == other.q0;
  }
  return (q0 == other.q0 && q1 == other.q1) ||
         (q0 == other.q1 && q1 == other.q0);
}

GateOp make_op(Gate g, std::uint32_t q) { return GateOp{g, 0.0, q, q}; }

GateOp make_op(Gate g, std::uint32_t q0, std::uint32_t q1) {
  return GateOp{g, 0.0, q0, q1};
}

GateOp make_op(Gate g, double param, std::uint32_t q) {
  return GateOp{g, param, q, q};
}

GateOp make_op(Gate g, double param, std::uint32_t q0, std::uint32_t q1) {
  return GateOp{g, param, q0, q1};
}

void Circuit::validate() const {
  for (const auto& op : ops) {
    const auto& info = gate_info(op.gate);
    if (op.q0 >= num_qubits || (info.num_qubits == 2 && op.q1 >= num_qubits)) {
      throw ValidationError("gate qubit index out of range");
    }
    if (info.num_qubits == 2 && op.q0 == op.q1) {
      throw ValidationError("multi-qubit op references the same qubit twice");
    }
    if (info.num_params == 1 && !std::isfinite(op.param)) {
      throw ValidationError("non-finite gate parameter");
    }
  }
  for (const auto& m : measurements) {
    if (m.qubit >= num_qubits) {
      throw ValidationError("measurement qubit index out of range");
    }
  }
}

std::size_t Circuit::two_qubit_count() const {
  std::size_t count = 0;
  for (const auto& op : ops) {
    count += is_two_qubit(op.gate) ? 1 : 0;
  }
  return count;
}

std::uint64_t circuit_hash(const Circuit& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](const void* data, std::size_t len) {
    h = fnv1a64(std::string_view(static_cast<const char*>(data), len), h);
  };
  mix(&c.num_qubits, sizeof(c.num_qubits));
  for (const auto& op : c.ops) {
    mix(&op.gate, sizeof(op.gate));
    mix(&op.param, sizeof(op.param));
    mix(&op.q0, sizeof(op.q0));
    if (is_two_qubit(op.gate)) {
      mix(&op.q1, sizeof(op.q1));
    }
  }
  for (const auto& m : c.measurements) {
    mix(&m.qubit, sizeof(m.qubit));
    mix(&m.cbit, sizeof(m.cbit));
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return {buf};
}

} // namespace qcomp
