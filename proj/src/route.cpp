// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/passes.hpp"
#include "qcomp/rng.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace qcomp {

namespace {

// Shared routing machinery. Wires name the positions at circuit start; `pi`
// tracks where each wire's state currently sits. Ops are emitted at their
// wires' current positions; SWAPs move states and update `pi`.
class Router {
public:
  Router(const Circuit& in, const DeviceModel& d) : in_(in), device_(d) {
    out_.num_qubits = in.num_qubits;
    pi_.resize(in.num_qubits);
    rev_.resize(in.num_qubits);
    for (std::uint32_t w = 0; w < in.num_qubits; ++w) {
      pi_[w] = w;
      rev_[w] = w;
    }
  }

  std::uint32_t position(std::uint32_t wire) const { return pi_[wire]; }
  std::size_t swap_count() const { return swaps_; }

  void emit_1q(const GateOp& op) {
    GateOp moved = op;
    moved.q0 = pi_[op.q0];
    moved.q1 = moved.q0;
    out_.ops.push_back(moved);
  }

  void emit_2q(const GateOp& op) {
    GateOp moved = op;
    moved.q0 = pi_[op.q0];
    moved.q1 = pi_[op.q1];
    if (!device_.coupled(moved.q0, moved.q1)) {
      throw PassError("internal: emission on uncoupled pair");
    }
    out_.ops.push_back(moved);
  }

  /// Exchanges the states at positions p and q (must be coupled). The SWAP
  /// is written in the device's gates; when it lands right after a CX on the
  /// same pair, the decomposition starts with that CX's orientation so a
  /// later cancellation pass can elide the pair.
  void emit_swap(std::uint32_t p, std::uint32_t q) {
    if (!device_.coupled(p, q)) {
      throw PassError("internal: SWAP on uncoupled pair");
    }
    if (device_.is_native(Gate::Swap)) {
      out_.ops.push_back(make_op(Gate::Swap, p, q));
    } else if (device_.is_native(Gate::Cx)) {
      std::uint32_t a = p;
      std::uint32_t b = q;
      if (!out_.ops.empty()) {
        const auto& prev = out_.ops.back();
        if (prev.gate == Gate::Cx &&
            normalized_pair(prev.q0, prev.q1) == normalized_pair(p, q)) {
          a = prev.q0;
          b = prev.q1;
        }
      }
      out_.ops.push_back(make_op(Gate::Cx, a, b));
      out_.ops.push_back(make_op(Gate::Cx, b, a));
      out_.ops.push_back(make_op(Gate::Cx, a, b));
    } else {
      // No native CX (e.g. an rxx-based set); expand a lone SWAP.
      Circuit one;
      one.num_qubits = out_.num_qubits;
      one.ops.push_back(make_op(Gate::Swap, p, q));
      const auto native = synthesize_to_native(one, device_);
      out_.ops.insert(out_.ops.end(), native.ops.begin(), native.ops.end());
    }
    ++swaps_;
    const auto wp = rev_[p];
    const auto wq = rev_[q];
    std::swap(pi_[wp], pi_[wq]);
    std::swap(rev_[p], rev_[q]);
  }

  PassResult finish(const MappingState& ms) {
    PassResult result;
    result.circuit = std::move(out_);
    result.circuit.measurements = in_.measurements;
    for (auto& m : result.circuit.measurements) {
      m.qubit = pi_[m.qubit];
    }
    result.mapping = ms;
    result.mapping.push_permutation(pi_);
    return result;
  }

private:
  const Circuit& in_;
  const DeviceModel& device_;
  Circuit out_;
  std::vector<std::uint32_t> pi_;
  std::vector<std::uint32_t> rev_;
  std::size_t swaps_ = 0;
};

void check_routable(const Circuit& c, const DeviceModel& d,
                    const MappingState& ms) {
  if (!ms.has_layout()) {
    throw PassError("routing requires a layout");
  }
  const auto& dist = d.distances();
  for (const auto& op : c.ops) {
    if (is_two_qubit(op.gate) && dist[op.q0][op.q1] == UINT32_MAX) {
      throw PassError("coupling graph is disconnected between qubits " +
                      std::to_string(op.q0) + " and " + std::to_string(op.q1));
    }
  }
}

// Lexicographically smallest shortest path (optionally randomized per hop).
std::vector<std::uint32_t> shortest_path(const DeviceModel& d,
                                         std::uint32_t from, std::uint32_t to,
                                         Rng* rng) {
  const auto& dist = d.distances();
  std::vector<std::uint32_t> path{from};
  auto current = from;
  while (current != to) {
    std::vector<std::uint32_t> closer;
    for (const auto nb : d.adjacency()[current]) {
      if (dist[nb][to] + 1 == dist[current][to]) {
        closer.push_back(nb);
      }
    }
    const auto next =
        rng == nullptr ? closer.front() : closer[rng->index(closer.size())];
    path.push_back(next);
    current = next;
  }
  return path;
}

PassResult route_in_order(const Circuit& c, const DeviceModel& d,
                          const MappingState& ms, Rng* rng) {
  Router router(c, d);
  for (const auto& op : c.ops) {
    if (!is_two_qubit(op.gate)) {
      router.emit_1q(op);
      continue;
    }
    auto p = router.position(op.q0);
    auto q = router.position(op.q1);
    if (!d.coupled(p, q)) {
      const auto path = shortest_path(d, p, q, rng);
      for (std::size_t i = 0; i + 2 < path.size(); ++i) {
        router.emit_swap(path[i], path[i + 1]);
      }
    }
    router.emit_2q(op);
  }
  return router.finish(ms);
}

} // namespace

PassResult route_basic(const Circuit& c, const DeviceModel& d,
                       const MappingState& ms) {
  check_routable(c, d, ms);
  return route_in_order(c, d, ms, nullptr);
}

PassResult route_stochastic(const Circuit& c, const DeviceModel& d,
                            const MappingState& ms, int candidates) {
  check_routable(c, d, ms);
  PassResult best;
  std::size_t best_swaps = std::numeric_limits<std::size_t>::max();
  for (int k = 0; k < candidates; ++k) {
    Rng rng(combine_seed(ms.seed, static_cast<std::uint64_t>(k)));
    auto result = route_in_order(c, d, ms, &rng);
    // SWAP count ~ size delta; compare output sizes directly.
    const auto size = result.circuit.ops.size();
    if (size < best_swaps) {
      best_swaps = size;
      best = std::move(result);
    }
  }
  return best;
}

PassResult route_lookahead(const Circuit& c, const DeviceModel& d,
                           const MappingState& ms) {
  check_routable(c, d, ms);
  Router router(c, d);

  // Per-wire FIFO of op indices; an op is ready when it heads the queue on
  // each of its wires.
  std::vector<std::deque<std::size_t>> wire_queue(c.num_qubits);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const auto& op = c.ops[i];
    wire_queue[op.q0].push_back(i);
    if (is_two_qubit(op.gate)) {
      wire_queue[op.q1].push_back(i);
    }
  }
  const auto ready = [&](std::size_t i) {
    const auto& op = c.ops[i];
    if (wire_queue[op.q0].empty() || wire_queue[op.q0].front() != i) {
      return false;
    }
    if (is_two_qubit(op.gate) &&
        (wire_queue[op.q1].empty() || wire_queue[op.q1].front() != i)) {
      return false;
    }
    return true;
  };
  const auto pop = [&](std::size_t i) {
    const auto& op = c.ops[i];
    wire_queue[op.q0].pop_front();
    if (is_two_qubit(op.gate)) {
      wire_queue[op.q1].pop_front();
    }
  };

  std::size_t emitted = 0;
  std::size_t swaps_since_progress = 0;
  const std::size_t stall_limit = 2 * std::size_t{c.num_qubits} + 8;
  const auto& dist = d.distances();

  while (emitted < c.ops.size()) {
    // Emit everything ready and executable.
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (std::uint32_t w = 0; w < c.num_qubits; ++w) {
        while (!wire_queue[w].empty()) {
          const auto i = wire_queue[w].front();
          if (!ready(i)) {
            break;
          }
          const auto& op = c.ops[i];
          if (!is_two_qubit(op.gate)) {
            router.emit_1q(op);
          } else if (d.coupled(router.position(op.q0),
                               router.position(op.q1))) {
            router.emit_2q(op);
          } else {
            break;
          }
          pop(i);
          ++emitted;
          progressed = true;
          swaps_since_progress = 0;
        }
      }
    }
    if (emitted == c.ops.size()) {
      break;
    }

    // Blocked front layer plus a lookahead window of upcoming 2q ops.
    std::vector<std::size_t> front;
    for (std::uint32_t w = 0; w < c.num_qubits; ++w) {
      if (!wire_queue[w].empty()) {
        const auto i = wire_queue[w].front();
        if (ready(i) && std::find(front.begin(), front.end(), i) == front.end()) {
          front.push_back(i);
        }
      }
    }
    std::vector<std::size_t> window;
    for (std::size_t i = front.empty() ? 0 : front.front();
         i < c.ops.size() && window.size() < 20; ++i) {
      if (is_two_qubit(c.ops[i].gate) &&
          std::find(front.begin(), front.end(), i) == front.end()) {
        window.push_back(i);
      }
    }

    if (swaps_since_progress >= stall_limit) {
      // Fallback: route the first blocked gate along a shortest path.
      const auto i = front.front();
      const auto path = shortest_path(d, router.position(c.ops[i].q0),
                                      router.position(c.ops[i].q1), nullptr);
      for (std::size_t s = 0; s + 2 < path.size(); ++s) {
        router.emit_swap(path[s], path[s + 1]);
      }
      continue;
    }

    // Candidate SWAPs touch a front-gate endpoint; score by summed distances
    // of front gates plus discounted lookahead distances.
    std::vector<QubitPair> candidates;
    for (const auto i : front) {
      for (const auto endpoint : {router.position(c.ops[i].q0),
                                  router.position(c.ops[i].q1)}) {
        for (const auto nb : d.adjacency()[endpoint]) {
          const auto pair = normalized_pair(endpoint, nb);
          if (std::find(candidates.begin(), candidates.end(), pair) ==
              candidates.end()) {
            candidates.push_back(pair);
          }
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());

    const auto score_with = [&](const QubitPair& swap) {
      const auto moved = [&](std::uint32_t pos) {
        if (pos == swap.first) {
          return swap.second;
        }
        if (pos == swap.second) {
          return swap.first;
        }
        return pos;
      };
      double score = 0.0;
      for (const auto i : front) {
        score += dist[moved(router.position(c.ops[i].q0))]
                     [moved(router.position(c.ops[i].q1))];
      }
      if (!window.empty()) {
        double look = 0.0;
        for (const auto i : window) {
          look += dist[moved(router.position(c.ops[i].q0))]
                      [moved(router.position(c.ops[i].q1))];
        }
        score += 0.5 * look / static_cast<double>(window.size());
      }
      return score;
    };

    QubitPair best = candidates.front();
    double best_score = score_with(best);
    for (const auto& cand : candidates) {
      const auto s = score_with(cand);
      if (s < best_score) {
        best = cand;
        best_score = s;
      }
    }
    router.emit_swap(best.first, best.second);
    ++swaps_since_progress;
  }

  return router.finish(ms);
}

} // namespace qcomp
