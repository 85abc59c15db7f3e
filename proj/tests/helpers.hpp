// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_TESTS_HELPERS_HPP
#define QCOMP_TESTS_HELPERS_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/rng.hpp"
#include "qcomp/sim.hpp"

#include <complex>
#include <vector>

namespace qcomp::testing {

/// Line-coupled superconducting device with uniform exemplar calibration.
inline DeviceModel line_device(std::uint32_t n, const std::string& id = "line") {
  DeviceModel d;
  d.id = id;
  d.technology = Technology::Superconducting;
  d.num_qubits = n;
  d.native_gates = {Gate::Rz, Gate::Sx, Gate::X, Gate::Cx};
  for (std::uint32_t q = 0; q + 1 < n; ++q) {
    d.coupling.insert({q, q + 1});
  }
  d.calibration.single_qubit_fidelity.assign(n, 0.997);
  d.calibration.readout_fidelity.assign(n, 0.975);
  for (const auto& pair : d.coupling) {
    d.calibration.two_qubit_fidelity[pair] = 0.982;
  }
  d.validate();
  return d;
}

inline DeviceModel ion_device(std::uint32_t n, const std::string& id = "ion") {
  DeviceModel d;
  d.id = id;
  d.technology = Technology::IonTrap;
  d.num_qubits = n;
  d.native_gates = {Gate::Rx, Gate::Rz, Gate::Rxx};
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      d.coupling.insert({a, b});
    }
  }
  d.calibration.single_qubit_fidelity.assign(n, 0.997);
  d.calibration.readout_fidelity.assign(n, 0.975);
  for (const auto& pair : d.coupling) {
    d.calibration.two_qubit_fidelity[pair] = 0.982;
  }
  d.validate();
  return d;
}

/// The worked three-qubit example: two X gates that cancel, an H and an
/// RZ(-pi/2) that fuse after synthesis, and CNOTs between all pairs.
/// Wire i holds logical qubit q_i.
inline Circuit example_circuit() {
  Circuit c;
  c.num_qubits = 3;
  c.ops.push_back(make_op(Gate::X, 2u));
  c.ops.push_back(make_op(Gate::X, 2u));
  c.ops.push_back(make_op(Gate::H, 1u));
  c.ops.push_back(make_op(Gate::Rz, -1.5707963267948966, 1u));
  c.ops.push_back(make_op(Gate::Cx, 2u, 1u));
  c.ops.push_back(make_op(Gate::Cx, 1u, 0u));
  c.ops.push_back(make_op(Gate::Cx, 2u, 0u));
  return c;
}

/// Seeded random circuit over the full vocabulary (no measurements).
inline Circuit random_circuit(std::uint32_t num_qubits, std::size_t num_ops,
                              std::uint64_t seed, bool with_measurements = false) {
  Rng rng(seed);
  Circuit c;
  c.num_qubits = num_qubits;
  for (std::size_t i = 0; i < num_ops; ++i) {
    const auto g = static_cast<Gate>(rng.index(kNumGates));
    const auto& info = gate_info(g);
    if (info.num_qubits == 2 && num_qubits < 2) {
      continue;
    }
    const auto q0 = static_cast<std::uint32_t>(rng.index(num_qubits));
    std::uint32_t q1 = q0;
    if (info.num_qubits == 2) {
      q1 = static_cast<std::uint32_t>(rng.index(num_qubits - 1));
      q1 = q1 >= q0 ? q1 + 1 : q1;
    }
    const double param =
        info.num_params == 1 ? rng.uniform(-3.14159, 3.14159) : 0.0;
    c.ops.push_back(info.num_qubits == 2 ? make_op(g, param, q0, q1)
                                         : make_op(g, param, q0));
  }
  if (with_measurements) {
    for (std::uint32_t q = 0; q < num_qubits; ++q) {
      c.measurements.push_back({q, q});
    }
  }
  return c;
}

/// Independent depth/critical-path oracle: enumerates every maximal
/// dependency path explicitly (exponential; for small circuits only).
/// Returns {longest path length, max two-qubit gates on such a path}.
inline std::pair<std::size_t, std::size_t>
enumerate_critical_paths(const Circuit& c) {
  struct Oracle {
    std::vector<std::vector<std::size_t>> succ;
    std::vector<bool> two_qubit_node;
    std::vector<bool> has_pred;
    std::size_t best_len = 0;
    std::size_t best_two_qubit = 0;

    void dfs(std::size_t node, std::size_t len, std::size_t twoq) {
      len += 1;
      twoq += two_qubit_node[node] ? 1 : 0;
      if (succ[node].empty()) {
        if (len > best_len) {
          best_len = len;
          best_two_qubit = twoq;
        } else if (len == best_len && twoq > best_two_qubit) {
          best_two_qubit = twoq;
        }
        return;
      }
      for (const auto next : succ[node]) {
        dfs(next, len, twoq);
      }
    }
  } oracle;

  const std::size_t n = c.ops.size() + c.measurements.size();
  oracle.succ.resize(n);
  oracle.two_qubit_node.resize(n);
  oracle.has_pred.assign(n, false);
  std::vector<std::size_t> last(c.num_qubits, SIZE_MAX);
  const auto link = [&](std::size_t node, std::uint32_t q) {
    if (last[q] != SIZE_MAX) {
      auto& s = oracle.succ[last[q]];
      bool present = false;
      for (const auto existing : s) {
        present |= existing == node;
      }
      if (!present) {
        s.push_back(node);
      }
      oracle.has_pred[node] = true;
    }
    last[q] = node;
  };
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    oracle.two_qubit_node[i] = is_two_qubit(c.ops[i].gate);
    link(i, c.ops[i].q0);
    if (oracle.two_qubit_node[i]) {
      link(i, c.ops[i].q1);
    }
  }
  for (std::size_t j = 0; j < c.measurements.size(); ++j) {
    link(c.ops.size() + j, c.measurements[j].qubit);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!oracle.has_pred[i]) {
      oracle.dfs(i, 0, 0);
    }
  }
  return {oracle.best_len, oracle.best_two_qubit};
}

/// Unitary equality up to one global phase, column by column.
inline bool same_unitary(const Circuit& a, const Circuit& b,
                         double tol = 1e-9) {
  using Cd = std::complex<double>;
  const auto nq = std::max(a.num_qubits, b.num_qubits);
  const std::size_t dim = std::size_t{1} << nq;
  Cd phase{0.0, 0.0};
  for (std::size_t basis = 0; basis < dim; ++basis) {
    Circuit prep_a = a;
    Circuit prep_b = b;
    prep_a.num_qubits = nq;
    prep_b.num_qubits = nq;
    prep_a.measurements.clear();
    prep_b.measurements.clear();
    std::vector<GateOp> prefix;
    for (std::uint32_t q = 0; q < nq; ++q) {
      if ((basis >> q) & 1U) {
        prefix.push_back(make_op(Gate::X, q));
      }
    }
    prep_a.ops.insert(prep_a.ops.begin(), prefix.begin(), prefix.end());
    prep_b.ops.insert(prep_b.ops.begin(), prefix.begin(), prefix.end());
    const auto va = simulate_statevector(prep_a);
    const auto vb = simulate_statevector(prep_b);
    for (std::size_t r = 0; r < dim; ++r) {
      if (phase == Cd{0.0, 0.0} && std::abs(va[r]) > 1e-6) {
        phase = vb[r] / va[r];
      }
    }
    for (std::size_t r = 0; r < dim; ++r) {
      if (std::abs(vb[r] - phase * va[r]) > tol) {
        return false;
      }
    }
  }
  return true;
}

} // namespace qcomp::testing

#endif
