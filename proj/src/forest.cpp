// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/forest.hpp"

#include "qcomp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qcomp {

using nlohmann::json;

std::uint64_t TrainingSample::content_hash() const {
  std::ostringstream text;
  for (const auto v : features.to_vector()) {
    text << v << ",";
  }
  text << label;
  return fnv1a64(text.str());
}

std::uint64_t ForestConfig::content_hash() const {
  std::ostringstream text;
  text << seed << ";";
  for (const auto t : grid_trees) {
    text << t << ",";
  }
  for (const auto d : grid_max_depth) {
    text << d << ",";
  }
  for (const auto l : grid_min_leaf) {
    text << l << ",";
  }
  text << cv_folds << ";" << train_fraction;
  return fnv1a64(text.str());
}

std::vector<TrainingSample>
generate_labels(const std::vector<std::pair<std::string, Circuit>>& corpus,
                const std::vector<DeviceModel>& fleet,
                const std::map<std::string, PolicyModel>& policies,
                const FigureOfMerit& fom, ResultStore& store,
                std::vector<std::string>* excluded) {
  for (const auto& d : fleet) {
    if (policies.count(d.id) == 0) {
      throw ForestError("missing policy for fleet device '" + d.id + "'");
    }
  }
  std::vector<TrainingSample> samples;
  for (const auto& [name, circuit] : corpus) {
    TrainingSample sample;
    sample.features = extract_features(circuit);
    sample.circuit_hash = circuit_hash(circuit);
    bool fits_any = false;
    for (const auto& d : fleet) {
      if (circuit.num_qubits > d.num_qubits) {
        // Too-small devices get the worst score.
        sample.per_device_scores[d.id] = 0.0;
        continue;
      }
      fits_any = true;
      const auto& policy = policies.at(d.id);
      const auto policy_hash = to_hex(fnv1a64(policy_to_json_text(policy)));
      StoreRow row;
      row.circuit_hash = to_hex(sample.circuit_hash);
      row.device_id = d.id;
      row.fom_id = fom.id;
      row.catalog = catalog_version();
      row.policy_hash = policy_hash;
      const auto key = ResultStore::key_of(row);
      if (const auto* existing = store.find(key)) {
        sample.per_device_scores[d.id] = existing->score;
        continue;
      }
      const auto compiled = compile_with_policy(circuit, policy, d);
      row.score = compiled.score;
      row.pass_log = compiled.pass_log;
      store.append(row);
      sample.per_device_scores[d.id] = compiled.score;
    }
    if (!fits_any) {
      if (excluded != nullptr) {
        excluded->push_back(name);
      }
      continue;
    }
    // Tie-break: score desc, qubit count asc, id asc.
    std::string best;
    double best_score = -1.0;
    std::uint32_t best_qubits = 0;
    for (const auto& d : fleet) {
      const auto score = sample.per_device_scores.at(d.id);
      if (circuit.num_qubits > d.num_qubits) {
        continue;
      }
      const bool better =
          score > best_score ||
          (score == best_score &&
           (d.num_qubits < best_qubits ||
            (d.num_qubits == best_qubits && d.id < best)));
      if (best.empty() || better) {
        best = d.id;
        best_score = score;
        best_qubits = d.num_qubits;
      }
    }
    sample.label = best;
    samples.push_back(std::move(sample));
  }
  return samples;
}

namespace {

struct Dataset {
  std::vector<std::vector<double>> features;
  std::vector<std::size_t> labels; // indices into classes
  std::vector<std::string> classes;
};

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) {
    return 0.0;
  }
  double impurity = 1.0;
  for (const auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    impurity -= p * p;
  }
  return impurity;
}

class TreeBuilder {
public:
  TreeBuilder(const Dataset& data, int max_depth, int min_leaf,
              std::uint64_t seed)
      : data_(data), max_depth_(max_depth), min_leaf_(min_leaf), rng_(seed) {}

  DecisionTree build(const std::vector<std::size_t>& indices) {
    DecisionTree tree;
    grow(indices, 0, tree);
    return tree;
  }

private:
  int grow(const std::vector<std::size_t>& indices, int depth,
           DecisionTree& tree) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    std::vector<std::size_t> counts(data_.classes.size(), 0);
    for (const auto i : indices) {
      ++counts[data_.labels[i]];
    }
    const bool pure =
        std::count_if(counts.begin(), counts.end(),
                      [](std::size_t c) { return c > 0; }) <= 1;
    const bool depth_capped = max_depth_ >= 0 && depth >= max_depth_;
    if (pure || depth_capped ||
        indices.size() < 2 * static_cast<std::size_t>(min_leaf_)) {
      make_leaf(tree.nodes[node_id], counts);
      return node_id;
    }

    // sqrt-d feature subsample, drawn per node.
    const std::size_t dim = data_.features.front().size();
    const auto subset = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::sqrt(static_cast<double>(dim)))));
    std::vector<std::size_t> all_features(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      all_features[i] = i;
    }
    rng_.shuffle(all_features);
    all_features.resize(subset);
    std::sort(all_features.begin(), all_features.end());

    const double parent_gini = gini(counts, indices.size());
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = parent_gini - 1e-12; // require strict improvement

    for (const auto feature : all_features) {
      std::vector<double> values;
      values.reserve(indices.size());
      for (const auto i : indices) {
        values.push_back(data_.features[i][feature]);
      }
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t v = 0; v + 1 < values.size(); ++v) {
        const double threshold = (values[v] + values[v + 1]) / 2.0;
        std::vector<std::size_t> left_counts(data_.classes.size(), 0);
        std::vector<std::size_t> right_counts(data_.classes.size(), 0);
        std::size_t left_total = 0;
        for (const auto i : indices) {
          if (data_.features[i][feature] <= threshold) {
            ++left_counts[data_.labels[i]];
            ++left_total;
          } else {
            ++right_counts[data_.labels[i]];
          }
        }
        const std::size_t right_total = indices.size() - left_total;
        if (left_total < static_cast<std::size_t>(min_leaf_) ||
            right_total < static_cast<std::size_t>(min_leaf_)) {
          continue;
        }
        const double weighted =
            (static_cast<double>(left_total) * gini(left_counts, left_total) +
             static_cast<double>(right_total) *
                 gini(right_counts, right_total)) /
            static_cast<double>(indices.size());
        if (weighted < best_score) {
          best_score = weighted;
          best_feature = static_cast<int>(feature);
          best_threshold = threshold;
        }
      }
    }

    if (best_feature < 0) {
      make_leaf(tree.nodes[node_id], counts);
      return node_id;
    }

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    for (const auto i : indices) {
      if (data_.features[i][static_cast<std::size_t>(best_feature)] <=
          best_threshold) {
        left_idx.push_back(i);
      } else {
        right_idx.push_back(i);
      }
    }
    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    const int left = grow(left_idx, depth + 1, tree);
    const int right = grow(right_idx, depth + 1, tree);
    tree.nodes[node_id].left = left;
    tree.nodes[node_id].right = right;
    return node_id;
  }

  void make_leaf(TreeNode& node, const std::vector<std::size_t>& counts) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) {
        node.class_counts[data_.classes[c]] = counts[c];
      }
    }
  }

  const Dataset& data_;
  int max_depth_;
  int min_leaf_;
  Rng rng_;
};

std::vector<DecisionTree> train_trees(const Dataset& data,
                                      const std::vector<std::size_t>& pool,
                                      int num_trees, int max_depth,
                                      int min_leaf, std::uint64_t seed) {
  std::vector<DecisionTree> trees;
  trees.reserve(static_cast<std::size_t>(num_trees));
  for (int t = 0; t < num_trees; ++t) {
    Rng boot(combine_seed(seed, 0xb00 + static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> sample;
    sample.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      sample.push_back(pool[boot.index(pool.size())]);
    }
    TreeBuilder builder(data, max_depth, min_leaf,
                        combine_seed(seed, 0x7e0 + static_cast<std::uint64_t>(t)));
    trees.push_back(builder.build(sample));
  }
  return trees;
}

std::vector<std::pair<std::string, double>>
votes_of(const std::vector<DecisionTree>& trees,
         const std::vector<std::string>& classes,
         const std::vector<double>& features) {
  std::map<std::string, double> shares;
  for (const auto& cls : classes) {
    shares[cls] = 0.0;
  }
  for (const auto& tree : trees) {
    const auto& counts = tree.leaf_counts(features);
    // Majority vote of the leaf; ties go to the lexicographically first.
    std::string vote;
    std::size_t best = 0;
    for (const auto& [cls, count] : counts) {
      if (count > best) {
        best = count;
        vote = cls;
      }
    }
    shares[vote] += 1.0;
  }
  std::vector<std::pair<std::string, double>> result(shares.begin(),
                                                     shares.end());
  const double total = static_cast<double>(trees.size());
  for (auto& [cls, share] : result) {
    share /= total;
  }
  return result;
}

double top1_accuracy(const std::vector<DecisionTree>& trees,
                     const Dataset& data,
                     const std::vector<std::size_t>& indices) {
  if (indices.empty()) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (const auto i : indices) {
    const auto votes = votes_of(trees, data.classes, data.features[i]);
    std::string best;
    double best_share = -1.0;
    for (const auto& [cls, share] : votes) {
      if (share > best_share) {
        best_share = share;
        best = cls;
      }
    }
    hits += best == data.classes[data.labels[i]] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(indices.size());
}

} // namespace

const std::map<std::string, std::size_t>&
DecisionTree::leaf_counts(const std::vector<double>& features) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(node)];
    node = features[static_cast<std::size_t>(n.feature)] <= n.threshold
               ? n.left
               : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].class_counts;
}

ForestModel train_forest(const std::vector<TrainingSample>& samples,
                         const ForestConfig& cfg, const std::string& fom_id,
                         const std::vector<DeviceModel>& fleet) {
  if (samples.size() < 10) {
    throw ForestError("need at least 10 samples to train a forest");
  }
  // Canonical order by content hash makes everything independent of the
  // caller's sample order.
  std::vector<std::size_t> canonical(samples.size());
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    canonical[i] = i;
  }
  std::stable_sort(canonical.begin(), canonical.end(),
                   [&](std::size_t a, std::size_t b) {
                     return samples[a].content_hash() <
                            samples[b].content_hash();
                   });

  Dataset data;
  {
    std::set<std::string> class_set;
    for (const auto& s : samples) {
      class_set.insert(s.label);
    }
    if (class_set.size() < 2) {
      throw ForestError("need at least 2 distinct labels");
    }
    data.classes.assign(class_set.begin(), class_set.end());
    for (const auto i : canonical) {
      data.features.push_back(samples[i].features.to_vector());
      const auto it = std::find(data.classes.begin(), data.classes.end(),
                                samples[i].label);
      data.labels.push_back(
          static_cast<std::size_t>(it - data.classes.begin()));
    }
  }

  // Stratified 70/30 split over the canonical order.
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> heldout_idx;
  {
    std::map<std::size_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      by_class[data.labels[i]].push_back(i);
    }
    for (auto& [cls, members] : by_class) {
      Rng rng(combine_seed(cfg.seed, 0x517a + cls));
      rng.shuffle(members);
      const auto take = static_cast<std::size_t>(
          std::round(cfg.train_fraction * static_cast<double>(members.size())));
      for (std::size_t i = 0; i < members.size(); ++i) {
        (i < take ? train_idx : heldout_idx).push_back(members[i]);
      }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(heldout_idx.begin(), heldout_idx.end());
  }

  // Grid search by k-fold cross-validation on the train slice.
  int best_trees = cfg.grid_trees.front();
  int best_depth = cfg.grid_max_depth.front();
  int best_leaf = cfg.grid_min_leaf.front();
  double best_cv = -1.0;
  for (const auto trees : cfg.grid_trees) {
    for (const auto depth : cfg.grid_max_depth) {
      for (const auto leaf : cfg.grid_min_leaf) {
        double total = 0.0;
        for (int fold = 0; fold < cfg.cv_folds; ++fold) {
          std::vector<std::size_t> fit;
          std::vector<std::size_t> check;
          for (std::size_t i = 0; i < train_idx.size(); ++i) {
            (static_cast<int>(i % static_cast<std::size_t>(cfg.cv_folds)) ==
                     fold
                 ? check
                 : fit)
                .push_back(train_idx[i]);
          }
          if (fit.empty() || check.empty()) {
            continue;
          }
          const auto cv_trees =
              train_trees(data, fit, trees, depth, leaf,
                          combine_seed(cfg.seed,
                                       static_cast<std::uint64_t>(fold)));
          total += top1_accuracy(cv_trees, data, check);
        }
        const double mean = total / static_cast<double>(cfg.cv_folds);
        if (mean > best_cv) {
          best_cv = mean;
          best_trees = trees;
          best_depth = depth;
          best_leaf = leaf;
        }
      }
    }
  }

  ForestModel model;
  model.trees = train_trees(data, train_idx, best_trees, best_depth,
                            best_leaf, combine_seed(cfg.seed, 0xf17));
  model.classes = data.classes;
  model.fom_id = fom_id;
  model.feature_schema = feature_schema_hash();
  for (const auto& d : fleet) {
    model.roster.emplace_back(d.id, d.num_qubits);
  }
  std::sort(model.roster.begin(), model.roster.end());

  model.report.train_samples = train_idx.size();
  model.report.heldout_samples = heldout_idx.size();
  model.report.chosen_trees = best_trees;
  model.report.chosen_max_depth = best_depth;
  model.report.chosen_min_leaf = best_leaf;
  model.report.heldout_top1 = top1_accuracy(model.trees, data, heldout_idx);
  std::size_t top3_hits = 0;
  for (const auto i : heldout_idx) {
    auto votes = votes_of(model.trees, data.classes, data.features[i]);
    std::sort(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) {
        return a.second > b.second;
      }
      return a.first < b.first;
    });
    for (std::size_t k = 0; k < votes.size() && k < 3; ++k) {
      if (votes[k].first == data.classes[data.labels[i]]) {
        ++top3_hits;
        break;
      }
    }
    model.report.heldout_hashes.push_back(
        to_hex(samples[canonical[i]].content_hash()));
  }
  model.report.heldout_top3 =
      heldout_idx.empty()
          ? 0.0
          : static_cast<double>(top3_hits) /
                static_cast<double>(heldout_idx.size());
  return model;
}

std::vector<std::pair<std::string, double>>
forest_votes(const ForestModel& f, const FeatureVector& features) {
  return votes_of(f.trees, f.classes, features.to_vector());
}

std::vector<std::pair<std::string, double>>
predict_device(const Circuit& c, const ForestModel& f) {
  if (f.feature_schema != feature_schema_hash()) {
    throw ForestError("forest feature schema mismatch");
  }
  const auto features = extract_features(c);
  const auto votes = forest_votes(f, features);
  std::map<std::string, double> share_of(votes.begin(), votes.end());

  std::vector<std::pair<std::string, double>> ranking;
  for (const auto& [id, qubits] : f.roster) {
    if (qubits < c.num_qubits) {
      continue; // too small, masked out after voting
    }
    const auto it = share_of.find(id);
    ranking.emplace_back(id, it == share_of.end() ? 0.0 : it->second);
  }
  if (ranking.empty()) {
    throw ForestError("no roster device fits a circuit with " +
                      std::to_string(c.num_qubits) + " qubits");
  }
  const auto qubits_of = [&](const std::string& id) {
    for (const auto& [rid, q] : f.roster) {
      if (rid == id) {
        return q;
      }
    }
    return UINT32_MAX;
  };
  std::sort(ranking.begin(), ranking.end(),
            [&](const auto& a, const auto& b) {
              if (a.second != b.second) {
                return a.second > b.second;
              }
              if (qubits_of(a.first) != qubits_of(b.first)) {
                return qubits_of(a.first) < qubits_of(b.first);
              }
              return a.first < b.first;
            });
  return ranking;
}

// ---- serialization ----

std::string forest_to_json_text(const ForestModel& f) {
  json j;
  j["format"] = "qcomp-forest-v1";
  j["schema"] = f.feature_schema;
  j["fom_id"] = f.fom_id;
  j["classes"] = f.classes;
  json roster = json::array();
  for (const auto& [id, qubits] : f.roster) {
    roster.push_back({id, qubits});
  }
  j["roster"] = roster;
  json trees = json::array();
  for (const auto& tree : f.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      json node;
      node["f"] = n.feature;
      node["t"] = n.threshold;
      node["l"] = n.left;
      node["r"] = n.right;
      if (n.feature < 0) {
        node["c"] = n.class_counts;
      }
      nodes.push_back(node);
    }
    trees.push_back(nodes);
  }
  j["trees"] = trees;
  json report;
  report["top1"] = f.report.heldout_top1;
  report["top3"] = f.report.heldout_top3;
  report["train_samples"] = f.report.train_samples;
  report["heldout_samples"] = f.report.heldout_samples;
  report["trees"] = f.report.chosen_trees;
  report["max_depth"] = f.report.chosen_max_depth;
  report["min_leaf"] = f.report.chosen_min_leaf;
  report["heldout_hashes"] = f.report.heldout_hashes;
  j["report"] = report;
  return j.dump(2) + "\n";
}

ForestModel forest_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ForestError(std::string("corrupt forest file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "qcomp-forest-v1") {
      throw ForestError("unsupported forest format");
    }
    ForestModel f;
    f.feature_schema = j.at("schema").get<std::string>();
    if (f.feature_schema != feature_schema_hash()) {
      throw ForestError("forest feature schema mismatch");
    }
    f.fom_id = j.at("fom_id").get<std::string>();
    f.classes = j.at("classes").get<std::vector<std::string>>();
    for (const auto& row : j.at("roster")) {
      f.roster.emplace_back(row.at(0).get<std::string>(),
                            row.at(1).get<std::uint32_t>());
    }
    for (const auto& tree_json : j.at("trees")) {
      DecisionTree tree;
      for (const auto& node_json : tree_json) {
        TreeNode n;
        n.feature = node_json.at("f").get<int>();
        n.threshold = node_json.at("t").get<double>();
        n.left = node_json.at("l").get<int>();
        n.right = node_json.at("r").get<int>();
        if (n.feature < 0) {
          n.class_counts =
              node_json.at("c").get<std::map<std::string, std::size_t>>();
        }
        tree.nodes.push_back(std::move(n));
      }
      f.trees.push_back(std::move(tree));
    }
    const auto& report = j.at("report");
    f.report.heldout_top1 = report.at("top1").get<double>();
    f.report.heldout_top3 = report.at("top3").get<double>();
    f.report.train_samples = report.at("train_samples").get<std::size_t>();
    f.report.heldout_samples = report.at("heldout_samples").get<std::size_t>();
    f.report.chosen_trees = report.at("trees").get<int>();
    f.report.chosen_max_depth = report.at("max_depth").get<int>();
    f.report.chosen_min_leaf = report.at("min_leaf").get<int>();
    f.report.heldout_hashes =
        report.at("heldout_hashes").get<std::vector<std::string>>();
    return f;
  } catch (const json::exception& e) {
    throw ForestError(std::string("corrupt forest file: ") + e.what());
  }
}

void save_forest(const ForestModel& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ForestError("cannot write forest file '" + path + "'");
  }
  out << forest_to_json_text(f);
}

ForestModel load_forest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ForestError("cannot open forest file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return forest_from_json_text(buffer.str());
}

} // namespace qcomp
