// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_CORPUS_HPP
#define QCOMP_CORPUS_HPP

#include "qcomp/circuit.hpp"

#include <string>
#include <vector>

namespace qcomp {

class CorpusError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Built-in circuit families. All circuits are target-independent (any
/// vocabulary gate, no device assumptions) and measure every qubit.
enum class Family {
  Ghz,
  Qft,
  WState,
  RandomCliffordT,
  EntanglingAnsatz,
  QaoaLike,
  AmplitudeEstimationLike,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::vector<Family> all_families();

struct CorpusSpec {
  std::vector<Family> families = all_families();
  std::uint32_t min_qubits = 2;
  std::uint32_t max_qubits = 12;
  int instances_per_size = 1;
  std::uint64_t seed = 11;
  /// Training corpora must not contain GHZ (held out for generalization).
  bool training = false;

  std::uint64_t content_hash() const;
};

/// Deterministic per spec; names encode family, size and instance.
std::vector<std::pair<std::string, Circuit>>
generate_corpus(const CorpusSpec& spec);

Circuit make_ghz(std::uint32_t n);
Circuit make_qft(std::uint32_t n);
Circuit make_wstate(std::uint32_t n);

} // namespace qcomp

#endif
