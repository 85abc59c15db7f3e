// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qcomp {

namespace {

using Cd = std::complex<double>;
using Matrix = std::vector<std::vector<Cd>>;

constexpr double kPi = 3.14159265358979323846;
constexpr Cd kI{0.0, 1.0};

Matrix matrix_1q(Gate g, double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  switch (g) {
  case Gate::X:
    return {{0, 1}, {1, 0}};
  case Gate::Y:
    return {{0, -kI}, {kI, 0}};
  case Gate::Z:
    return {{1, 0}, {0, -1}};
  case Gate::H: {
    const double r = 1.0 / std::sqrt(2.0);
    return {{r, r}, {r, -r}};
  }
  case Gate::S:
    return {{1, 0}, {0, kI}};
  case Gate::Sdg:
    return {{1, 0}, {0, -kI}};
  case Gate::T:
    return {{1, 0}, {0, std::exp(kI * (kPi / 4))}};
  case Gate::Tdg:
    return {{1, 0}, {0, std::exp(-kI * (kPi / 4))}};
  case Gate::Sx:
    return {{0.5 + 0.5 * kI, 0.5 - 0.5 * kI}, {0.5 - 0.5 * kI, 0.5 + 0.5 * kI}};
  case Gate::Rx:
    return {{c, -kI * s}, {-kI * s, c}};
  case Gate::Ry:
    return {{c, -s}, {s, c}};
  case Gate::Rz:
    return {{std::exp(-kI * (theta / 2)), 0}, {0, std::exp(kI * (theta / 2))}};
  default:
    throw std::logic_error("not a single-qubit gate");
  }
}

// Basis order |q1 q0> with q0 the gate's first qubit (control for cx).
Matrix matrix_2q(Gate g, double theta) {
  switch (g) {
  case Gate::Cx:
    // control = q0 (low bit), target = q1.
    return {{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}};
  case Gate::Cz:
    return {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
  case Gate::Swap:
    return {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  case Gate::Rxx: {
    const Cd c = std::cos(theta / 2);
    const Cd s = -kI * std::sin(theta / 2);
    return {{c, 0, 0, s}, {0, c, s, 0}, {0, s, c, 0}, {s, 0, 0, c}};
  }
  default:
    throw std::logic_error("not a two-qubit gate");
  }
}

void apply_1q(std::vector<Cd>& state, const Matrix& u, std::uint32_t q) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < state.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Cd a0 = state[i];
      const Cd a1 = state[i + stride];
      state[i] = u[0][0] * a0 + u[0][1] * a1;
      state[i + stride] = u[1][0] * a0 + u[1][1] * a1;
    }
  }
}

void apply_2q(std::vector<Cd>& state, const Matrix& u, std::uint32_t q0,
              std::uint32_t q1) {
  const std::size_t m0 = std::size_t{1} << q0;
  const std::size_t m1 = std::size_t{1} << q1;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if ((i & m0) != 0 || (i & m1) != 0) {
      continue;
    }
    const std::size_t i00 = i;
    const std::size_t i01 = i | m0; // q0 set
    const std::size_t i10 = i | m1; // q1 set
    const std::size_t i11 = i | m0 | m1;
    const Cd a00 = state[i00];
    const Cd a01 = state[i01];
    const Cd a10 = state[i10];
    const Cd a11 = state[i11];
    state[i00] = u[0][0] * a00 + u[0][1] * a01 + u[0][2] * a10 + u[0][3] * a11;
    state[i01] = u[1][0] * a00 + u[1][1] * a01 + u[1][2] * a10 + u[1][3] * a11;
    state[i10] = u[2][0] * a00 + u[2][1] * a01 + u[2][2] * a10 + u[2][3] * a11;
    state[i11] = u[3][0] * a00 + u[3][1] * a01 + u[3][2] * a10 + u[3][3] * a11;
  }
}

} // namespace

Matrix gate_matrix(Gate g, double param) {
  return is_two_qubit(g) ? matrix_2q(g, param) : matrix_1q(g, param);
}

std::vector<Cd> simulate_statevector(const Circuit& c, std::uint32_t qubit_cap) {
  if (c.num_qubits > qubit_cap) {
    throw SimulatorCapExceeded("circuit exceeds simulator qubit cap (" +
                               std::to_string(c.num_qubits) + " > " +
                               std::to_string(qubit_cap) + ")");
  }
  std::vector<Cd> state(std::size_t{1} << c.num_qubits, Cd{0.0, 0.0});
  state[0] = 1.0;
  for (const auto& op : c.ops) {
    if (is_two_qubit(op.gate)) {
      apply_2q(state, matrix_2q(op.gate, op.param), op.q0, op.q1);
    } else {
      apply_1q(state, matrix_1q(op.gate, op.param), op.q0);
    }
  }
  return state;
}

bool equivalent_up_to_layout(const Circuit& original, const Circuit& compiled,
                             const MappingState& mapping, double tolerance,
                             std::uint32_t qubit_cap) {
  // Wires the compiled circuit actually uses, plus the images of all logical
  // qubits. Everything else stays |0> and is dropped from simulation.
  std::set<std::uint32_t> active;
  for (std::uint32_t l = 0; l < original.num_qubits; ++l) {
    active.insert(mapping.final_position(l));
  }
  for (const auto& op : compiled.ops) {
    active.insert(op.q0);
    if (is_two_qubit(op.gate)) {
      active.insert(op.q1);
    }
  }
  for (const auto& m : compiled.measurements) {
    active.insert(m.qubit);
  }
  if (original.num_qubits > qubit_cap || active.size() > qubit_cap) {
    throw SimulatorCapExceeded("active wire set exceeds simulator qubit cap");
  }

  std::map<std::uint32_t, std::uint32_t> compact;
  for (const auto w : active) {
    compact.emplace(w, static_cast<std::uint32_t>(compact.size()));
  }

  Circuit reduced = compiled;
  reduced.num_qubits = static_cast<std::uint32_t>(active.size());
  for (auto& op : reduced.ops) {
    op.q0 = compact.at(op.q0);
    if (is_two_qubit(op.gate)) {
      op.q1 = compact.at(op.q1);
    } else {
      op.q1 = op.q0;
    }
  }
  reduced.measurements.clear();

  Circuit stripped = original;
  stripped.measurements.clear();

  const auto psi = simulate_statevector(stripped, qubit_cap);
  const auto phi = simulate_statevector(reduced, qubit_cap);

  // Expected state: logical bit l of the original index lands on the compact
  // position of its final physical wire.
  const std::size_t dim = phi.size();
  std::vector<Cd> expected(dim, Cd{0.0, 0.0});
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    std::size_t mapped = 0;
    for (std::uint32_t l = 0; l < original.num_qubits; ++l) {
      if ((idx >> l) & 1U) {
        mapped |= std::size_t{1} << compact.at(mapping.final_position(l));
      }
    }
    expected[mapped] = psi[idx];
  }

  // Phase freedom: one phase per assignment of the jointly measured bits
  // (global phase when nothing is measured).
  std::size_t measured_mask = 0;
  {
    std::set<std::uint32_t> orig_measured;
    for (const auto& m : original.measurements) {
      orig_measured.insert(mapping.final_position(m.qubit));
    }
    std::set<std::uint32_t> comp_measured;
    for (const auto& m : compiled.measurements) {
      comp_measured.insert(m.qubit);
    }
    if (orig_measured != comp_measured) {
      return false;
    }
    for (const auto w : orig_measured) {
      measured_mask |= std::size_t{1} << compact.at(w);
    }
  }

  // Phase reference per group: the largest expected amplitude.
  std::map<std::size_t, std::size_t> group_ref;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t group = i & measured_mask;
    const auto it = group_ref.find(group);
    if (it == group_ref.end() ||
        std::abs(expected[i]) > std::abs(expected[it->second])) {
      group_ref[group] = i;
    }
  }
  std::map<std::size_t, Cd> group_phase;
  for (const auto& [group, ref_idx] : group_ref) {
    const double ref = std::abs(expected[ref_idx]);
    if (ref <= tolerance) {
      group_phase[group] = Cd{1.0, 0.0};
      continue;
    }
    Cd phase = phi[ref_idx] / expected[ref_idx];
    const double mag = std::abs(phase);
    if (std::abs(mag - 1.0) > tolerance) {
      return false;
    }
    group_phase[group] = phase / mag;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const Cd phase = group_phase.at(i & measured_mask);
    if (std::abs(phi[i] - phase * expected[i]) > tolerance) {
      return false;
    }
  }
  return true;
}

} // namespace qcomp
