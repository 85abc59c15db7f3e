// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/passes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qcomp {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double normalize_angle(double theta) {
  // Into (-pi, pi]; multiples of 2*pi only shift global phase.
  return std::remainder(theta, kTwoPi);
}

bool is_rotation(Gate g) {
  return g == Gate::Rx || g == Gate::Ry || g == Gate::Rz || g == Gate::Rxx;
}

// True when b directly follows a (same qubit footprint) and a*b = identity
// up to global phase.
bool is_inverse_pair(const GateOp& a, const GateOp& b) {
  if (!a.same_qubits(b)) {
    return false;
  }
  if (a.gate == b.gate && is_self_inverse(a.gate)) {
    // cx is only self-inverse with matching orientation.
    if (a.gate == Gate::Cx) {
      return a.q0 == b.q0 && a.q1 == b.q1;
    }
    return true;
  }
  const auto pair_of = [](Gate x, Gate y, const GateOp& u, const GateOp& v) {
    return (u.gate == x && v.gate == y) || (u.gate == y && v.gate == x);
  };
  return pair_of(Gate::S, Gate::Sdg, a, b) || pair_of(Gate::T, Gate::Tdg, a, b);
}

std::vector<std::uint32_t> qubits_of(const GateOp& op) {
  if (is_two_qubit(op.gate)) {
    return {op.q0, op.q1};
  }
  return {op.q0};
}

Circuit rebuild(const Circuit& c, const std::vector<GateOp>& ops) {
  Circuit out;
  out.num_qubits = c.num_qubits;
  out.ops = ops;
  out.measurements = c.measurements;
  return out;
}

// Commutation table used by commute_cancel. Conservative: false when unsure.
bool commutes(const GateOp& a, const GateOp& b) {
  const auto qa = qubits_of(a);
  const auto qb = qubits_of(b);
  std::vector<std::uint32_t> shared;
  for (const auto q : qa) {
    if (std::find(qb.begin(), qb.end(), q) != qb.end()) {
      shared.push_back(q);
    }
  }
  if (shared.empty()) {
    return true;
  }
  if (is_diagonal(a.gate) && is_diagonal(b.gate)) {
    return true;
  }
  const auto x_like = [](Gate g) {
    return g == Gate::X || g == Gate::Sx || g == Gate::Rx;
  };
  if (a.gate == Gate::Cx && b.gate == Gate::Cx) {
    return a.q1 != b.q0 && b.q1 != a.q0; // share only controls or only targets
  }
  const auto cx_compatible = [&](const GateOp& cx, const GateOp& other) {
    if (cx.gate != Gate::Cx || is_two_qubit(other.gate)) {
      return false;
    }
    if (other.q0 == cx.q0) {
      return is_diagonal(other.gate); // diagonal on the control
    }
    return x_like(other.gate); // X-family on the target
  };
  if (cx_compatible(a, b) || cx_compatible(b, a)) {
    return true;
  }
  // X-family single-qubit gates commute among themselves and with rxx.
  const auto xx_like = [&](const GateOp& op) {
    return op.gate == Gate::Rxx || (!is_two_qubit(op.gate) && x_like(op.gate));
  };
  if (xx_like(a) && xx_like(b)) {
    return true;
  }
  if (a.gate == b.gate && !is_two_qubit(a.gate) && qa == qb) {
    return true; // same single-qubit gate on the same qubit
  }
  return false;
}

} // namespace

Circuit cancel_inverses(const Circuit& c) {
  // Stack matching handles nested pairs in one pass (x h h x collapses).
  std::vector<std::vector<std::size_t>> stacks(c.num_qubits);
  std::vector<bool> removed(c.ops.size(), false);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const auto& op = c.ops[i];
    const auto qs = qubits_of(op);
    std::size_t top = SIZE_MAX;
    bool same_top = true;
    for (const auto q : qs) {
      const auto t = stacks[q].empty() ? SIZE_MAX : stacks[q].back();
      if (top == SIZE_MAX) {
        top = t;
      }
      same_top &= t == top;
    }
    if (same_top && top != SIZE_MAX && is_inverse_pair(c.ops[top], op)) {
      removed[top] = true;
      removed[i] = true;
      for (const auto q : qs) {
        stacks[q].pop_back();
      }
      continue;
    }
    for (const auto q : qs) {
      stacks[q].push_back(i);
    }
  }
  std::vector<GateOp> kept;
  kept.reserve(c.ops.size());
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (!removed[i]) {
      kept.push_back(c.ops[i]);
    }
  }
  return rebuild(c, kept);
}

Circuit merge_rotations(const Circuit& c) {
  std::vector<GateOp> ops = c.ops;
  std::vector<std::vector<std::size_t>> stacks(c.num_qubits);
  std::vector<bool> removed(ops.size(), false);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    const auto qs = qubits_of(op);
    std::size_t top = SIZE_MAX;
    bool same_top = true;
    for (const auto q : qs) {
      const auto t = stacks[q].empty() ? SIZE_MAX : stacks[q].back();
      if (top == SIZE_MAX) {
        top = t;
      }
      same_top &= t == top;
    }
    if (same_top && top != SIZE_MAX && is_rotation(op.gate) &&
        ops[top].gate == op.gate && ops[top].same_qubits(op)) {
      ops[top].param = normalize_angle(ops[top].param + op.param);
      removed[i] = true;
      continue; // merged target stays on the stacks
    }
    for (const auto q : qs) {
      stacks[q].push_back(i);
    }
  }
  std::vector<GateOp> kept;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!removed[i]) {
      kept.push_back(ops[i]);
    }
  }
  return rebuild(c, kept);
}

Circuit drop_identity_rotations(const Circuit& c, double epsilon) {
  std::vector<GateOp> kept;
  kept.reserve(c.ops.size());
  for (const auto& op : c.ops) {
    if (is_rotation(op.gate) && std::abs(normalize_angle(op.param)) <= epsilon) {
      continue;
    }
    kept.push_back(op);
  }
  return rebuild(c, kept);
}

Circuit commute_cancel(const Circuit& c) {
  constexpr std::size_t kWindow = 32;
  std::vector<GateOp> ops = c.ops;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 1; i < ops.size() && !changed; ++i) {
      std::size_t seen = 0;
      for (std::size_t j = i; j-- > 0 && seen < kWindow; ++seen) {
        if (is_inverse_pair(ops[j], ops[i])) {
          // ops[j] must commute past everything in between.
          bool movable = true;
          for (std::size_t k = j + 1; k < i && movable; ++k) {
            movable = commutes(ops[k], ops[j]);
          }
          if (movable) {
            ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
            ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(j));
            changed = true;
            break;
          }
        }
        // A non-commuting op sharing a qubit blocks the search upward.
        if (!commutes(ops[j], ops[i])) {
          break;
        }
      }
    }
  }
  return rebuild(c, ops);
}

Circuit remove_diag_before_measure(const Circuit& c) {
  std::vector<bool> measured(c.num_qubits, false);
  for (const auto& m : c.measurements) {
    measured[m.qubit] = true;
  }
  std::vector<bool> clear(c.num_qubits, true); // no later kept op on qubit
  std::vector<GateOp> kept_rev;
  for (std::size_t i = c.ops.size(); i-- > 0;) {
    const auto& op = c.ops[i];
    const auto qs = qubits_of(op);
    bool removable = is_diagonal(op.gate);
    for (const auto q : qs) {
      removable &= clear[q] && measured[q];
    }
    if (removable) {
      continue;
    }
    for (const auto q : qs) {
      clear[q] = false;
    }
    kept_rev.push_back(op);
  }
  std::reverse(kept_rev.begin(), kept_rev.end());
  return rebuild(c, kept_rev);
}

Circuit consolidate_2q_blocks(const Circuit& c, const DeviceModel& d) {
  (void)d;
  // Runs of consecutive two-qubit ops on one unordered pair, uninterrupted
  // on either qubit, rewritten by a small exact peephole table.
  std::vector<GateOp> ops = c.ops;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> last_on_qubit(c.num_qubits, SIZE_MAX);
    std::vector<std::vector<std::size_t>> runs;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& op = ops[i];
      if (is_two_qubit(op.gate)) {
        const auto prev0 = last_on_qubit[op.q0];
        const auto prev1 = last_on_qubit[op.q1];
        if (prev0 != SIZE_MAX && prev0 == prev1 &&
            is_two_qubit(ops[prev0].gate) && ops[prev0].same_qubits(op) &&
            !runs.empty() && runs.back().back() == prev0) {
          runs.back().push_back(i);
        } else {
          runs.push_back({i});
        }
      }
      for (const auto q : qubits_of(op)) {
        last_on_qubit[q] = i;
      }
    }
    for (const auto& run : runs) {
      if (run.size() < 2) {
        continue;
      }
      std::vector<GateOp> block;
      for (const auto i : run) {
        block.push_back(ops[i]);
      }
      std::vector<GateOp> rewritten = block;
      bool block_changed = true;
      while (block_changed) {
        block_changed = false;
        // cx a,b ; cx b,a ; cx a,b  ->  swap a,b
        for (std::size_t i = 0; i + 2 < rewritten.size(); ++i) {
          const auto& g0 = rewritten[i];
          const auto& g1 = rewritten[i + 1];
          const auto& g2 = rewritten[i + 2];
          if (g0.gate == Gate::Cx && g1.gate == Gate::Cx &&
              g2.gate == Gate::Cx && g0.q0 == g2.q0 && g0.q1 == g2.q1 &&
              g1.q0 == g0.q1 && g1.q1 == g0.q0) {
            rewritten[i] = make_op(Gate::Swap, g0.q0, g0.q1);
            rewritten.erase(rewritten.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                            rewritten.begin() + static_cast<std::ptrdiff_t>(i) + 3);
            block_changed = true;
            break;
          }
        }
        if (block_changed) {
          continue;
        }
        // Adjacent inverse pairs and rxx merges inside the run.
        for (std::size_t i = 0; i + 1 < rewritten.size(); ++i) {
          if (is_inverse_pair(rewritten[i], rewritten[i + 1])) {
            rewritten.erase(rewritten.begin() + static_cast<std::ptrdiff_t>(i),
                            rewritten.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            block_changed = true;
            break;
          }
          if (rewritten[i].gate == Gate::Rxx &&
              rewritten[i + 1].gate == Gate::Rxx) {
            rewritten[i].param =
                normalize_angle(rewritten[i].param + rewritten[i + 1].param);
            rewritten.erase(rewritten.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            block_changed = true;
            break;
          }
        }
      }
      if (rewritten.size() < block.size()) {
        std::vector<GateOp> next;
        next.reserve(ops.size());
        std::size_t run_pos = 0;
        for (std::size_t i = 0; i < ops.size(); ++i) {
          if (run_pos < run.size() && run[run_pos] == i) {
            if (run_pos == 0) {
              next.insert(next.end(), rewritten.begin(), rewritten.end());
            }
            ++run_pos;
            continue;
          }
          next.push_back(ops[i]);
        }
        ops = std::move(next);
        changed = true;
        break; // run indices are stale; rescan
      }
    }
  }
  return rebuild(c, ops);
}

Circuit opt_preserving_sweep(const Circuit& c) {
  Circuit current = c;
  while (true) {
    Circuit next = cancel_inverses(current);
    next = merge_rotations(next);
    next = drop_identity_rotations(next);
    next = commute_cancel(next);
    next = remove_diag_before_measure(next);
    if (next == current) {
      return next;
    }
    current = std::move(next);
  }
}

} // namespace qcomp
