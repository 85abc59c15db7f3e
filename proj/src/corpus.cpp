// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/corpus.hpp"

#include "qcomp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qcomp {

namespace {

constexpr double kPi = 3.14159265358979323846;

void measure_all(Circuit& c) {
  for (std::uint32_t q = 0; q < c.num_qubits; ++q) {
    c.measurements.push_back({q, q});
  }
}

// Controlled phase: diag(1,1,1,e^{i theta}) on (control, target).
void emit_cp(Circuit& c, double theta, std::uint32_t control,
             std::uint32_t target) {
  c.ops.push_back(make_op(Gate::Rz, theta / 2, control));
  c.ops.push_back(make_op(Gate::Cx, control, target));
  c.ops.push_back(make_op(Gate::Rz, -theta / 2, target));
  c.ops.push_back(make_op(Gate::Cx, control, target));
  c.ops.push_back(make_op(Gate::Rz, theta / 2, target));
}

// Controlled RY via two half-rotations around a CX pair.
void emit_cry(Circuit& c, double theta, std::uint32_t control,
              std::uint32_t target) {
  c.ops.push_back(make_op(Gate::Ry, theta / 2, target));
  c.ops.push_back(make_op(Gate::Cx, control, target));
  c.ops.push_back(make_op(Gate::Ry, -theta / 2, target));
  c.ops.push_back(make_op(Gate::Cx, control, target));
}

void emit_rzz(Circuit& c, double theta, std::uint32_t a, std::uint32_t b) {
  c.ops.push_back(make_op(Gate::Cx, a, b));
  c.ops.push_back(make_op(Gate::Rz, theta, b));
  c.ops.push_back(make_op(Gate::Cx, a, b));
}

Circuit make_random_clifford_t(std::uint32_t n, std::uint64_t seed,
                               int instance) {
  // Two-qubit density cycles through presets so the family spans a wide
  // entanglement-ratio range.
  static constexpr double kDensities[] = {0.05, 0.2, 0.35, 0.5, 0.7, 0.9};
  const double p2 =
      kDensities[static_cast<std::size_t>(instance) % std::size(kDensities)];
  Rng rng(seed);
  Circuit c;
  c.num_qubits = n;
  const std::size_t length = 4 * n;
  static constexpr Gate k1q[] = {Gate::H, Gate::S,   Gate::Sdg, Gate::T,
                                 Gate::Tdg, Gate::X, Gate::Y,   Gate::Z};
  for (std::size_t i = 0; i < length; ++i) {
    if (n >= 2 && rng.uniform() < p2) {
      const auto a = static_cast<std::uint32_t>(rng.index(n));
      auto b = static_cast<std::uint32_t>(rng.index(n - 1));
      b = b >= a ? b + 1 : b;
      c.ops.push_back(make_op(rng.uniform() < 0.5 ? Gate::Cx : Gate::Cz, a, b));
    } else {
      const auto g = k1q[rng.index(std::size(k1q))];
      c.ops.push_back(make_op(g, static_cast<std::uint32_t>(rng.index(n))));
    }
  }
  measure_all(c);
  return c;
}

Circuit make_entangling_ansatz(std::uint32_t n, std::uint64_t seed,
                               int instance) {
  Rng rng(seed);
  Circuit c;
  c.num_qubits = n;
  const int layers = 2 + instance % 3;
  for (int layer = 0; layer < layers; ++layer) {
    for (std::uint32_t q = 0; q < n; ++q) {
      c.ops.push_back(make_op(Gate::Ry, rng.uniform(-kPi, kPi), q));
    }
    // Brickwork entangler.
    for (std::uint32_t q = 0; q + 1 < n; q += 2) {
      c.ops.push_back(make_op(Gate::Cx, q, q + 1));
    }
    for (std::uint32_t q = 1; q + 1 < n; q += 2) {
      c.ops.push_back(make_op(Gate::Cx, q, q + 1));
    }
  }
  for (std::uint32_t q = 0; q < n; ++q) {
    c.ops.push_back(make_op(Gate::Rz, rng.uniform(-kPi, kPi), q));
  }
  measure_all(c);
  return c;
}

Circuit make_qaoa_like(std::uint32_t n, std::uint64_t seed, int instance) {
  Rng rng(seed);
  Circuit c;
  c.num_qubits = n;
  const int rounds = 1 + instance % 2;
  for (std::uint32_t q = 0; q < n; ++q) {
    c.ops.push_back(make_op(Gate::H, q));
  }
  for (int round = 0; round < rounds; ++round) {
    const double gamma = rng.uniform(0.1, kPi);
    const double beta = rng.uniform(0.1, kPi);
    // Random cost graph with ~n edges.
    for (std::uint32_t e = 0; e < n && n >= 2; ++e) {
      const auto a = static_cast<std::uint32_t>(rng.index(n));
      auto b = static_cast<std::uint32_t>(rng.index(n - 1));
      b = b >= a ? b + 1 : b;
      emit_rzz(c, gamma, std::min(a, b), std::max(a, b));
    }
    for (std::uint32_t q = 0; q < n; ++q) {
      c.ops.push_back(make_op(Gate::Rx, beta, q));
    }
  }
  measure_all(c);
  return c;
}

Circuit make_ae_like(std::uint32_t n, std::uint64_t seed, int instance) {
  Rng rng(combine_seed(seed, static_cast<std::uint64_t>(instance)));
  Circuit c;
  c.num_qubits = n;
  if (n < 2) {
    throw CorpusError("amplitude-estimation-like needs >= 2 qubits");
  }
  const std::uint32_t target = n - 1;
  const double theta = rng.uniform(0.2, kPi - 0.2);
  c.ops.push_back(make_op(Gate::Ry, theta, target));
  for (std::uint32_t q = 0; q + 1 < n; ++q) {
    c.ops.push_back(make_op(Gate::H, q));
  }
  // Controlled powers of the rotation onto the estimation register.
  for (std::uint32_t q = 0; q + 1 < n; ++q) {
    emit_cry(c, theta * std::pow(2.0, q), q, target);
  }
  // Inverse-QFT-like phase ladder over the estimation register, swap-free.
  for (std::uint32_t i = n - 1; i-- > 0;) {
    for (std::uint32_t j = i + 1; j + 1 < n; ++j) {
      emit_cp(c, -kPi / std::pow(2.0, j - i), j, i);
    }
    c.ops.push_back(make_op(Gate::H, i));
  }
  measure_all(c);
  return c;
}

} // namespace

Circuit make_ghz(std::uint32_t n) {
  Circuit c;
  c.num_qubits = n;
  c.ops.push_back(make_op(Gate::H, 0u));
  for (std::uint32_t q = 0; q + 1 < n; ++q) {
    c.ops.push_back(make_op(Gate::Cx, q, q + 1));
  }
  measure_all(c);
  return c;
}

Circuit make_qft(std::uint32_t n) {
  Circuit c;
  c.num_qubits = n;
  for (std::uint32_t i = 0; i < n; ++i) {
    c.ops.push_back(make_op(Gate::H, i));
    for (std::uint32_t j = i + 1; j < n; ++j) {
      emit_cp(c, kPi / std::pow(2.0, j - i), j, i);
    }
  }
  for (std::uint32_t i = 0; i < n / 2; ++i) {
    c.ops.push_back(make_op(Gate::Swap, i, n - 1 - i));
  }
  measure_all(c);
  return c;
}

Circuit make_wstate(std::uint32_t n) {
  // Excitation-passing cascade: qubit k keeps a 1/sqrt(n) share of the
  // excitation and hands the rest to qubit k+1.
  Circuit c;
  c.num_qubits = n;
  c.ops.push_back(make_op(Gate::X, 0u));
  for (std::uint32_t k = 0; k + 1 < n; ++k) {
    const double theta = 2.0 * std::acos(std::sqrt(1.0 / (n - k)));
    emit_cry(c, theta, k, k + 1);
    c.ops.push_back(make_op(Gate::Cx, k + 1, k));
  }
  measure_all(c);
  return c;
}

std::string family_name(Family f) {
  switch (f) {
  case Family::Ghz:
    return "ghz";
  case Family::Qft:
    return "qft";
  case Family::WState:
    return "wstate";
  case Family::RandomCliffordT:
    return "random-clifford-t";
  case Family::EntanglingAnsatz:
    return "entangling-ansatz";
  case Family::QaoaLike:
    return "qaoa-like";
  case Family::AmplitudeEstimationLike:
    return "amplitude-estimation-like";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (const auto f : all_families()) {
    if (family_name(f) == name) {
      return f;
    }
  }
  throw CorpusError("unknown circuit family '" + name + "'");
}

std::vector<Family> all_families() {
  return {Family::Ghz,
          Family::Qft,
          Family::WState,
          Family::RandomCliffordT,
          Family::EntanglingAnsatz,
          Family::QaoaLike,
          Family::AmplitudeEstimationLike};
}

std::uint64_t CorpusSpec::content_hash() const {
  std::string text = "corpus-v1;";
  for (const auto f : families) {
    text += family_name(f) + ",";
  }
  text += ";" + std::to_string(min_qubits) + ";" + std::to_string(max_qubits) +
          ";" + std::to_string(instances_per_size) + ";" +
          std::to_string(seed) + ";" + (training ? "t" : "e");
  return fnv1a64(text);
}

std::vector<std::pair<std::string, Circuit>>
generate_corpus(const CorpusSpec& spec) {
  if (spec.min_qubits < 2 || spec.max_qubits > 32 ||
      spec.min_qubits > spec.max_qubits) {
    throw CorpusError("qubit range must lie within [2, 32]");
  }
  if (spec.training) {
    for (const auto f : spec.families) {
      if (f == Family::Ghz) {
        throw CorpusError("ghz is held out and cannot be in a training corpus");
      }
    }
  }
  std::vector<std::pair<std::string, Circuit>> corpus;
  for (const auto family : spec.families) {
    for (std::uint32_t n = spec.min_qubits; n <= spec.max_qubits; ++n) {
      for (int inst = 0; inst < spec.instances_per_size; ++inst) {
        const auto circuit_seed = combine_seed(
            spec.seed, fnv1a64(family_name(family) + ":" + std::to_string(n) +
                               ":" + std::to_string(inst)));
        Circuit c;
        switch (family) {
        case Family::Ghz:
          c = make_ghz(n);
          break;
        case Family::Qft:
          c = make_qft(n);
          break;
        case Family::WState:
          c = make_wstate(n);
          break;
        case Family::RandomCliffordT:
          c = make_random_clifford_t(n, circuit_seed, inst);
          break;
        case Family::EntanglingAnsatz:
          c = make_entangling_ansatz(n, circuit_seed, inst);
          break;
        case Family::QaoaLike:
          c = make_qaoa_like(n, circuit_seed, inst);
          break;
        case Family::AmplitudeEstimationLike:
          c = make_ae_like(n, circuit_seed, inst);
          break;
        }
        c.validate();
        char name[64];
        std::snprintf(name, sizeof(name), "%s_n%02u_i%02d",
                      family_name(family).c_str(), n, inst);
        corpus.emplace_back(name, std::move(c));
        // Deterministic families only vary with n.
        if ((family == Family::Ghz || family == Family::Qft ||
             family == Family::WState) &&
            inst == 0) {
          break;
        }
      }
    }
  }
  return corpus;
}

} // namespace qcomp
