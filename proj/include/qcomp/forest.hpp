// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_FOREST_HPP
#define QCOMP_FOREST_HPP

#include "qcomp/circuit.hpp"
#include "qcomp/device.hpp"
#include "qcomp/features.hpp"
#include "qcomp/fom.hpp"
#include "qcomp/policy.hpp"
#include "qcomp/store.hpp"

#include <map>
#include <string>
#include <vector>

namespace qcomp {

class ForestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TrainingSample {
  FeatureVector features;
  std::string label;
  std::map<std::string, double> per_device_scores;
  std::uint64_t circuit_hash = 0;

  /// Sampling and ordering key all bootstrap draws; position-independent.
  std::uint64_t content_hash() const;
};

/// Compiles every corpus circuit greedily on every fitting fleet device,
/// persists all (circuit, device) rows in the store (skipping ones already
/// present), and labels each circuit with the argmax device under the
/// tie-break: higher score, then fewer qubits, then id. Circuits fitting no
/// device are dropped; their names are returned through `excluded`.
std::vector<TrainingSample>
generate_labels(const std::vector<std::pair<std::string, Circuit>>& corpus,
                const std::vector<DeviceModel>& fleet,
                const std::map<std::string, PolicyModel>& policies,
                const FigureOfMerit& fom, ResultStore& store,
                std::vector<std::string>* excluded = nullptr);

struct ForestConfig {
  std::uint64_t seed = 7;
  std::vector<int> grid_trees{25, 100};
  std::vector<int> grid_max_depth{8, -1}; // -1: unbounded
  std::vector<int> grid_min_leaf{1, 3};
  int cv_folds = 5;
  double train_fraction = 0.7;

  std::uint64_t content_hash() const;
};

struct TreeNode {
  int feature = -1; // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::map<std::string, std::size_t> class_counts; // leaves only
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  const std::map<std::string, std::size_t>&
  leaf_counts(const std::vector<double>& features) const;
};

struct ForestReport {
  double heldout_top1 = 0.0;
  double heldout_top3 = 0.0;
  std::size_t train_samples = 0;
  std::size_t heldout_samples = 0;
  int chosen_trees = 0;
  int chosen_max_depth = 0;
  int chosen_min_leaf = 0;
  /// Content hashes of the held-out samples (for score-based containment
  /// checks downstream).
  std::vector<std::string> heldout_hashes;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::uint32_t>> roster; // id, qubits
  std::string fom_id;
  std::string feature_schema;
  ForestReport report;
};

/// Stratified 70/30 split, 5-fold cross-validated grid search on the train
/// slice, bootstrap trees with sqrt-d feature subsampling and Gini splits.
/// Deterministic given cfg.seed and independent of sample order.
ForestModel train_forest(const std::vector<TrainingSample>& samples,
                         const ForestConfig& cfg, const std::string& fom_id,
                         const std::vector<DeviceModel>& fleet);

/// Vote shares over all classes (sum to 1), no fit filtering.
std::vector<std::pair<std::string, double>>
forest_votes(const ForestModel& f, const FeatureVector& features);

/// Roster devices ranked by vote share (ties: fewer qubits, then id), with
/// devices smaller than the circuit filtered out after voting. No
/// compilation happens here.
std::vector<std::pair<std::string, double>>
predict_device(const Circuit& c, const ForestModel& f);

void save_forest(const ForestModel& f, const std::string& path);
ForestModel load_forest(const std::string& path);
std::string forest_to_json_text(const ForestModel& f);
ForestModel forest_from_json_text(const std::string& text);

} // namespace qcomp

#endif
