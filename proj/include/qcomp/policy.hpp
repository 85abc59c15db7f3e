// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_POLICY_HPP
#define QCOMP_POLICY_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/fom.hpp"
#include "qcomp/rl_env.hpp"

#include <string>
#include <vector>

namespace qcomp {

class PolicyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Observation fed to the policy: the seven numeric circuit features
/// (qubit count and depth log-scaled into [0,1]), a one-hot of the MDP
/// state, and a layout-present flag.
std::vector<double> make_observation(const Circuit& c,
                                     const CompilationStatus& status,
                                     bool layout_present);

std::size_t observation_dim();

/// Linear-softmax policy over the pass catalog with a linear value head.
struct PolicyModel {
  std::vector<std::vector<double>> weights; // actions x obs
  std::vector<double> bias;                 // actions
  std::vector<double> value_weights;        // obs
  double value_bias = 0.0;

  std::string device_id;
  std::string fom_id;
  std::string catalog;
  std::uint64_t seed = 0;
  int trained_iterations = 0;
  double best_eval = 0.0;

  double value(const std::vector<double>& obs) const;
  std::vector<double> logits(const std::vector<double>& obs) const;
};

PolicyModel init_policy(const std::string& device_id, const std::string& fom_id,
                        std::uint64_t seed);

/// Probabilities over the catalog; masked actions carry exactly zero mass.
std::vector<double> masked_probabilities(const std::vector<double>& logits,
                                         const std::vector<bool>& mask);

struct TrainConfig {
  std::uint64_t seed = 1;
  int iterations = 150;
  int batch_episodes = 64;
  int epochs = 4;
  double learning_rate = 0.02;
  double clip = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double eval_fraction = 0.25;
  int max_eval_circuits = 12;
  int max_steps = 40;

  std::uint64_t content_hash() const;
};

/// One rollout step retained for the update.
struct PgStep {
  std::vector<double> observation;
  std::vector<bool> mask;
  std::size_t action = 0;
  double logp_old = 0.0;
  double advantage = 0.0;
  double return_value = 0.0;
};

struct PgGradients {
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  std::vector<double> value_weights;
  double value_bias = 0.0;
};

/// Clipped-surrogate objective (plus value and entropy terms) with its
/// analytic gradient; the training loop and the finite-difference check both
/// go through here.
double pg_loss(const PolicyModel& p, const std::vector<PgStep>& batch,
               const TrainConfig& cfg, PgGradients* gradients);

/// Masked policy-gradient training with PPO-style clipping over episodes of
/// the compilation MDP. Deterministic given cfg.seed; returns the parameters
/// with the best greedy score on a held-out corpus slice.
PolicyModel train_policy(const DeviceModel& device, const FigureOfMerit& fom,
                         const std::vector<Circuit>& corpus,
                         const TrainConfig& cfg);

enum class CompileMode { Greedy, Sample };

struct CompiledResult {
  Circuit circuit;
  MappingState mapping;
  std::vector<std::string> pass_log;
  double score = 0.0;
  bool used_fallback = false;
};

/// Rolls one episode with the trained policy. If it times out without an
/// executable circuit, falls back to the L1 baseline and flags it.
CompiledResult compile_with_policy(const Circuit& c, const PolicyModel& p,
                                   const DeviceModel& d,
                                   CompileMode mode = CompileMode::Greedy,
                                   std::uint64_t sample_seed = 0);

struct BruteForceResult {
  double best_score = 0.0;
  std::vector<std::string> best_sequence;
};

/// Exhaustive mask-pruned search over action sequences up to max_len
/// (terminate taken greedily whenever the circuit is executable), memoized
/// on circuit content. Guarded to small instances.
BruteForceResult brute_force_best(const Circuit& c, const DeviceModel& d,
                                  const FigureOfMerit& fom, int max_len);

void save_policy(const PolicyModel& p, const std::string& path);
PolicyModel load_policy(const std::string& path);
std::string policy_to_json_text(const PolicyModel& p);
PolicyModel policy_from_json_text(const std::string& text);

} // namespace qcomp

#endif
