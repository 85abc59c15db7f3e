// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/passes.hpp"

#include <cmath>

namespace qcomp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxExpansionDepth = 64;

// Fixed decomposition table. Each rule rewrites one gate into a short
// sequence over the vocabulary; expansion recurses until everything is
// native. All identities hold exactly up to global phase (checked against
// the statevector simulator in the test suite).
std::vector<GateOp> decompose(const GateOp& op) {
  const auto q = op.q0;
  const auto t = op.q1;
  const double theta = op.param;
  switch (op.gate) {
  case Gate::Z:
    return {make_op(Gate::Rz, kPi, q)};
  case Gate::S:
    return {make_op(Gate::Rz, kPi / 2, q)};
  case Gate::Sdg:
    return {make_op(Gate::Rz, -kPi / 2, q)};
  case Gate::T:
    return {make_op(Gate::Rz, kPi / 4, q)};
  case Gate::Tdg:
    return {make_op(Gate::Rz, -kPi / 4, q)};
  case Gate::H:
    return {make_op(Gate::Rz, kPi / 2, q), make_op(Gate::Sx, q),
            make_op(Gate::Rz, kPi / 2, q)};
  case Gate::Y:
    return {make_op(Gate::Z, q), make_op(Gate::X, q)};
  case Gate::X:
    return {make_op(Gate::Rx, kPi, q)};
  case Gate::Sx:
    return {make_op(Gate::Rx, kPi / 2, q)};
  case Gate::Rx:
    return {make_op(Gate::H, q), make_op(Gate::Rz, theta, q),
            make_op(Gate::H, q)};
  case Gate::Ry:
    return {make_op(Gate::Rz, -kPi / 2, q), make_op(Gate::Rx, theta, q),
            make_op(Gate::Rz, kPi / 2, q)};
  case Gate::Cx:
    // Moelmer-Soerensen style realization for rxx-based gate sets.
    return {make_op(Gate::Ry, kPi / 2, q),  make_op(Gate::Rxx, kPi / 2, q, t),
            make_op(Gate::Rx, -kPi / 2, q), make_op(Gate::Rx, -kPi / 2, t),
            make_op(Gate::Ry, -kPi / 2, q)};
  case Gate::Cz:
    return {make_op(Gate::H, t), make_op(Gate::Cx, q, t), make_op(Gate::H, t)};
  case Gate::Swap:
    return {make_op(Gate::Cx, q, t), make_op(Gate::Cx, t, q),
            make_op(Gate::Cx, q, t)};
  case Gate::Rxx:
    return {make_op(Gate::H, q),          make_op(Gate::H, t),
            make_op(Gate::Cx, q, t),      make_op(Gate::Rz, theta, t),
            make_op(Gate::Cx, q, t),      make_op(Gate::H, q),
            make_op(Gate::H, t)};
  case Gate::Rz:
    return {}; // no rewrite available
  }
  return {};
}

void expand(const GateOp& op, const DeviceModel& d, std::vector<GateOp>& out,
            int depth) {
  if (d.is_native(op.gate)) {
    out.push_back(op);
    return;
  }
  if (depth >= kMaxExpansionDepth) {
    throw PassError("no decomposition chain into the native set of '" + d.id +
                    "' for gate '" + std::string(gate_info(op.gate).name) + "'");
  }
  const auto expansion = decompose(op);
  if (expansion.empty()) {
    throw PassError("gate '" + std::string(gate_info(op.gate).name) +
                    "' has no decomposition rule for device '" + d.id + "'");
  }
  for (const auto& sub : expansion) {
    expand(sub, d, out, depth + 1);
  }
}

} // namespace

Circuit synthesize_to_native(const Circuit& c, const DeviceModel& d) {
  Circuit out;
  out.num_qubits = c.num_qubits;
  out.measurements = c.measurements;
  out.ops.reserve(c.ops.size());
  for (const auto& op : c.ops) {
    expand(op, d, out.ops, 0);
  }
  return out;
}

} // namespace qcomp
