// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_PIPELINE_HPP
#define QCOMP_PIPELINE_HPP

#include "qcomp/corpus.hpp"
#include "qcomp/device.hpp"
#include "qcomp/forest.hpp"
#include "qcomp/policy.hpp"
#include "qcomp/store.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qcomp {

class BundleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct BundleConfig {
  std::vector<std::string> fom_ids{"expected_fidelity", "critical_depth"};
  CorpusSpec train_spec;
  TrainConfig rl;
  ForestConfig forest;
  /// Policies train on the corpus slice up to this size (labels always use
  /// the full corpus).
  std::uint32_t rl_max_qubits = 32;

  BundleConfig() {
    train_spec.training = true;
    train_spec.families = {Family::Qft,
                           Family::WState,
                           Family::RandomCliffordT,
                           Family::EntanglingAnsatz,
                           Family::QaoaLike,
                           Family::AmplitudeEstimationLike};
  }
};

/// The deployable unit: per-device policies and a device-selection forest
/// for every bundled figure of merit, plus the persistent result store.
/// On disk it is a directory with a manifest recording input hashes so
/// that retraining skips artifacts whose inputs did not change.
struct PredictorBundle {
  std::string dir;
  std::vector<DeviceModel> fleet;
  std::map<std::string, std::map<std::string, PolicyModel>> policies; // fom -> device -> policy
  std::map<std::string, ForestModel> forests;                         // fom -> forest
  std::string store_path;

  const PolicyModel& policy_for(const std::string& fom_id,
                                const std::string& device_id) const;
  const ForestModel& forest_for(const std::string& fom_id) const;
  const DeviceModel& device(const std::string& device_id) const;
};

/// Trains (or resumes) a bundle under `out_dir`. Existing artifacts with
/// matching input hashes are reused untouched; `log`, when given, receives
/// one line per trained/reused artifact.
PredictorBundle train_bundle(const std::vector<DeviceModel>& fleet,
                             const BundleConfig& cfg,
                             const std::string& out_dir,
                             std::ostream* log = nullptr);

PredictorBundle load_bundle(const std::string& dir);

struct CompileOutcome {
  std::string device_id;
  Circuit circuit;
  MappingState mapping;
  std::vector<std::string> pass_log;
  double score = 0.0;
  bool used_fallback = false;
  std::vector<std::pair<std::string, double>> ranking; // prediction shares
};

/// Fig.-style predict-then-compile: forest picks the device, the device's
/// policy compiles. Throws BundleError when no roster device fits.
CompileOutcome predict_and_compile(const Circuit& c,
                                   const PredictorBundle& bundle,
                                   const std::string& fom_id);

struct BenchmarkRow {
  std::string name;
  double pipeline_score = 0.0;
  std::string device_id;
  double best_baseline = 0.0;
  double median_baseline = 0.0;
  double worst_baseline = 0.0;
  int rank = 1; // 1 + number of strictly better baselines
  std::map<std::string, double> baseline_scores; // "device/L1" -> score
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows; // sorted by pipeline score, descending
  std::vector<std::string> excluded_all_zero;
  double top_k_rate(int k) const;
  /// Max pipeline/best-baseline ratio over rows with a positive best.
  double max_improvement_ratio() const;
  std::string to_csv() const;
};

/// Baselines are the L1 and L2 pipelines on every fitting device (up to
/// 2 x fleet scores per benchmark); rows where everything scores zero are
/// excluded and listed.
BenchmarkReport
run_benchmarks(const std::vector<std::pair<std::string, Circuit>>& corpus,
               const PredictorBundle& bundle, const std::string& fom_id);

struct CrossComparison {
  // cell[i][j]: mean score under fom j of the pipeline trained for fom i.
  std::array<std::array<double, 2>, 2> cell{};
  std::array<std::string, 2> fom_ids;
  std::string to_csv() const;
};

CrossComparison
fom_cross_comparison(const std::vector<std::pair<std::string, Circuit>>& corpus,
                     const PredictorBundle& bundle,
                     const std::string& fom_a = "expected_fidelity",
                     const std::string& fom_b = "critical_depth");

struct DeviceDistribution {
  /// fit-count group -> device id -> times it was the best choice.
  std::map<int, std::map<std::string, int>> histogram;
  std::string to_csv() const;
};

DeviceDistribution device_distribution_report(
    const std::vector<std::pair<std::string, Circuit>>& corpus,
    const PredictorBundle& bundle, const std::string& fom_id);

enum class IsolationMode { FixedDevice, FixedCompiler };

struct IsolatedRow {
  std::string name;
  std::string device_id;
  double l1 = 0.0;
  double l2 = 0.0;
  double rl = 0.0;
  double full_pipeline = 0.0;
};

struct IsolatedReport {
  IsolationMode mode = IsolationMode::FixedDevice;
  std::vector<IsolatedRow> rows;
  std::string to_csv() const;
};

/// FixedDevice: L1/L2/RL on the largest device vs the full pipeline.
/// FixedCompiler: L1/L2/RL on the predicted device (RL equals the full
/// pipeline by construction).
IsolatedReport
isolated_evaluations(const std::vector<std::pair<std::string, Circuit>>& corpus,
                     const PredictorBundle& bundle, const std::string& fom_id,
                     IsolationMode mode);

} // namespace qcomp

#endif
