// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/pipeline.hpp"

#include "qcomp/passes.hpp"
#include "qcomp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qcomp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw BundleError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) {
    throw BundleError("cannot write '" + path.string() + "'");
  }
  out << content;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  return quoted + "\"";
}

} // namespace

const PolicyModel& PredictorBundle::policy_for(const std::string& fom_id,
                                               const std::string& device_id) const {
  const auto fom_it = policies.find(fom_id);
  if (fom_it == policies.end()) {
    throw BundleError("bundle has no policies for figure of merit '" + fom_id + "'");
  }
  const auto dev_it = fom_it->second.find(device_id);
  if (dev_it == fom_it->second.end()) {
    throw BundleError("bundle has no policy for device '" + device_id + "'");
  }
  return dev_it->second;
}

const ForestModel& PredictorBundle::forest_for(const std::string& fom_id) const {
  const auto it = forests.find(fom_id);
  if (it == forests.end()) {
    throw BundleError("bundle has no forest for figure of merit '" + fom_id + "'");
  }
  return it->second;
}

const DeviceModel& PredictorBundle::device(const std::string& device_id) const {
  for (const auto& d : fleet) {
    if (d.id == device_id) {
      return d;
    }
  }
  throw BundleError("bundle fleet has no device '" + device_id + "'");
}

namespace {

std::string policy_inputs_hash(const DeviceModel& d, const std::string& fom_id,
                               const BundleConfig& cfg,
                               std::uint64_t corpus_hash) {
  std::ostringstream text;
  text << catalog_version() << ";" << to_hex(d.content_hash()) << ";" << fom_id
       << ";" << corpus_hash << ";" << cfg.rl.content_hash() << ";"
       << cfg.rl_max_qubits;
  return to_hex(fnv1a64(text.str()));
}

std::string forest_inputs_hash(const std::string& fom_id,
                               const BundleConfig& cfg,
                               const std::vector<TrainingSample>& samples,
                               const std::vector<DeviceModel>& fleet,
                               const std::map<std::string, PolicyModel>& policies) {
  // Labels depend on every device's calibration and every policy, so their
  // stamps invalidate the forest even when the labels come out unchanged.
  std::ostringstream text;
  text << feature_schema_hash() << ";" << fom_id << ";"
       << cfg.forest.content_hash() << ";";
  for (const auto& d : fleet) {
    text << d.id << "=" << d.num_qubits << "=" << to_hex(d.content_hash())
         << ",";
  }
  text << ";";
  for (const auto& [device_id, policy] : policies) {
    text << device_id << "=" << to_hex(fnv1a64(policy_to_json_text(policy)))
         << ",";
  }
  text << ";";
  for (const auto& s : samples) {
    text << to_hex(s.content_hash()) << ",";
  }
  return to_hex(fnv1a64(text.str()));
}

} // namespace

PredictorBundle train_bundle(const std::vector<DeviceModel>& fleet,
                             const BundleConfig& cfg,
                             const std::string& out_dir, std::ostream* log) {
  const auto note = [log](const std::string& line) {
    if (log != nullptr) {
      *log << line << "\n";
    }
  };
  PredictorBundle bundle;
  bundle.dir = out_dir;
  bundle.fleet = fleet;
  fs::create_directories(out_dir);
  bundle.store_path = (fs::path(out_dir) / "store.ndjson").string();

  // Device descriptions are part of the bundle so it loads stand-alone.
  for (const auto& d : fleet) {
    const auto path = fs::path(out_dir) / "fleet" / (d.id + ".json");
    const auto text = device_to_json_text(d);
    if (!fs::exists(path) || read_file(path) != text) {
      write_file(path, text);
    }
  }

  json manifest;
  const auto manifest_path = fs::path(out_dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception&) {
      throw BundleError("corrupt bundle manifest at '" +
                        manifest_path.string() + "'");
    }
  }
  json artifacts =
      manifest.contains("artifacts") ? manifest["artifacts"] : json::object();

  const auto corpus = generate_corpus(cfg.train_spec);
  ResultStore store(bundle.store_path);

  for (const auto& fom_id : cfg.fom_ids) {
    const auto fom = make_fom(fom_id);
    for (const auto& d : bundle.fleet) {
      const auto rel = "policies/" + fom_id + "/" + d.id + ".json";
      const auto path = fs::path(out_dir) / rel;
      const auto expected = policy_inputs_hash(d, fom_id, cfg,
                                               cfg.train_spec.content_hash());
      if (fs::exists(path) && artifacts.contains(rel) &&
          artifacts[rel].get<std::string>() == expected) {
        try {
          bundle.policies[fom_id][d.id] = load_policy(path.string());
          note("reused policy " + rel);
          continue;
        } catch (const PolicyError& e) {
          throw BundleError("bundle artifact '" + rel +
                            "' is corrupt: " + e.what());
        }
      }
      std::vector<Circuit> train_circuits;
      for (const auto& [name, c] : corpus) {
        if (c.num_qubits <= d.num_qubits && c.num_qubits <= cfg.rl_max_qubits) {
          train_circuits.push_back(c);
        }
      }
      TrainConfig rl_cfg = cfg.rl;
      rl_cfg.seed = combine_seed(cfg.rl.seed, fnv1a64(fom_id + "/" + d.id));
      auto policy = train_policy(d, fom, train_circuits, rl_cfg);
      fs::create_directories(path.parent_path());
      save_policy(policy, path.string());
      artifacts[rel] = expected;
      bundle.policies[fom_id][d.id] = std::move(policy);
      note("trained policy " + rel);
    }

    auto samples = generate_labels(corpus, bundle.fleet,
                                   bundle.policies[fom_id], fom, store);
    const auto rel = "forest/" + fom_id + ".json";
    const auto path = fs::path(out_dir) / rel;
    const auto expected =
        forest_inputs_hash(fom_id, cfg, samples, fleet, bundle.policies[fom_id]);
    if (fs::exists(path) && artifacts.contains(rel) &&
        artifacts[rel].get<std::string>() == expected) {
      try {
        bundle.forests[fom_id] = load_forest(path.string());
        note("reused forest " + rel);
        continue;
      } catch (const ForestError& e) {
        throw BundleError("bundle artifact '" + rel +
                          "' is corrupt: " + e.what());
      }
    }
    auto forest = train_forest(samples, cfg.forest, fom_id, fleet);
    fs::create_directories(path.parent_path());
    save_forest(forest, path.string());
    artifacts[rel] = expected;
    bundle.forests[fom_id] = std::move(forest);
    note("trained forest " + rel);
  }

  manifest["format"] = "qcomp-bundle-v1";
  manifest["catalog"] = catalog_version();
  manifest["schema"] = feature_schema_hash();
  manifest["fom_ids"] = cfg.fom_ids;
  manifest["artifacts"] = artifacts;
  json fleet_json = json::object();
  for (const auto& d : fleet) {
    fleet_json[d.id] = to_hex(d.content_hash());
  }
  manifest["fleet"] = fleet_json;
  const auto manifest_text = manifest.dump(2) + "\n";
  if (!fs::exists(manifest_path) || read_file(manifest_path) != manifest_text) {
    write_file(manifest_path, manifest_text);
  }
  return bundle;
}

PredictorBundle load_bundle(const std::string& dir) {
  PredictorBundle bundle;
  bundle.dir = dir;
  const auto manifest_path = fs::path(dir) / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw BundleError("no bundle manifest under '" + dir + "'");
  }
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw BundleError(std::string("corrupt bundle manifest: ") + e.what());
  }
  if (manifest.at("catalog").get<std::string>() != catalog_version()) {
    throw BundleError("bundle was built against a different pass catalog");
  }
  for (const auto& entry : fs::directory_iterator(fs::path(dir) / "fleet")) {
    bundle.fleet.push_back(load_device(entry.path().string()));
  }
  std::sort(bundle.fleet.begin(), bundle.fleet.end(),
            [](const DeviceModel& a, const DeviceModel& b) {
              return a.id < b.id;
            });
  for (const auto& fom_id :
       manifest.at("fom_ids").get<std::vector<std::string>>()) {
    for (const auto& d : bundle.fleet) {
      const auto path =
          fs::path(dir) / "policies" / fom_id / (d.id + ".json");
      if (!fs::exists(path)) {
        throw BundleError("bundle is missing policy '" + path.string() + "'");
      }
      bundle.policies[fom_id][d.id] = load_policy(path.string());
    }
    const auto forest_path = fs::path(dir) / "forest" / (fom_id + ".json");
    if (!fs::exists(forest_path)) {
      throw BundleError("bundle is missing forest '" + forest_path.string() +
                        "'");
    }
    bundle.forests[fom_id] = load_forest(forest_path.string());
  }
  bundle.store_path = (fs::path(dir) / "store.ndjson").string();
  return bundle;
}

CompileOutcome predict_and_compile(const Circuit& c,
                                   const PredictorBundle& bundle,
                                   const std::string& fom_id) {
  const auto& forest = bundle.forest_for(fom_id);
  std::vector<std::pair<std::string, double>> ranking;
  try {
    ranking = predict_device(c, forest);
  } catch (const ForestError& e) {
    throw BundleError(e.what());
  }
  const auto& device_id = ranking.front().first;
  const auto& device = bundle.device(device_id);
  const auto compiled =
      compile_with_policy(c, bundle.policy_for(fom_id, device_id), device);
  CompileOutcome outcome;
  outcome.device_id = device_id;
  outcome.circuit = compiled.circuit;
  outcome.mapping = compiled.mapping;
  outcome.pass_log = compiled.pass_log;
  outcome.score = compiled.score;
  outcome.used_fallback = compiled.used_fallback;
  outcome.ranking = std::move(ranking);
  return outcome;
}

double BenchmarkReport::top_k_rate(int k) const {
  if (rows.empty()) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (const auto& row : rows) {
    hits += row.rank <= k ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

double BenchmarkReport::max_improvement_ratio() const {
  double best = 0.0;
  for (const auto& row : rows) {
    if (row.best_baseline > 0.0) {
      best = std::max(best, row.pipeline_score / row.best_baseline);
    }
  }
  return best;
}

std::string BenchmarkReport::to_csv() const {
  std::ostringstream out;
  out << "# benchmark scores, one row per benchmark, sorted by the pipeline "
         "score\n";
  out << "# columns: name, device, pipeline, best_baseline, median_baseline, "
         "worst_baseline, rank\n";
  out << "name,device,pipeline,best,median,worst,rank\n";
  for (const auto& row : rows) {
    out << csv_escape(row.name) << "," << row.device_id << ","
        << row.pipeline_score << "," << row.best_baseline << ","
        << row.median_baseline << "," << row.worst_baseline << "," << row.rank
        << "\n";
  }
  for (const auto& name : excluded_all_zero) {
    out << "# excluded (all scores zero): " << name << "\n";
  }
  return out.str();
}

BenchmarkReport
run_benchmarks(const std::vector<std::pair<std::string, Circuit>>& corpus,
               const PredictorBundle& bundle, const std::string& fom_id) {
  const auto fom = make_fom(fom_id);
  BenchmarkReport report;
  for (const auto& [name, circuit] : corpus) {
    BenchmarkRow row;
    row.name = name;
    std::vector<double> baselines;
    for (const auto& d : bundle.fleet) {
      if (circuit.num_qubits > d.num_qubits) {
        continue;
      }
      for (const auto level : {BaselineLevel::L1, BaselineLevel::L2}) {
        double score = 0.0;
        try {
          const auto result = baseline_pipeline(circuit, d, level);
          score = fom.score(result.circuit, d, result.mapping);
        } catch (const PassError&) {
          score = 0.0; // recorded as a failure for this combination
        }
        row.baseline_scores[d.id + (level == BaselineLevel::L1 ? "/L1" : "/L2")] =
            score;
        baselines.push_back(score);
      }
    }
    if (baselines.empty()) {
      report.excluded_all_zero.push_back(name + " (fits no device)");
      continue;
    }
    const auto outcome = predict_and_compile(circuit, bundle, fom_id);
    row.pipeline_score = outcome.score;
    row.device_id = outcome.device_id;
    std::vector<double> sorted = baselines;
    std::sort(sorted.begin(), sorted.end());
    row.worst_baseline = sorted.front();
    row.best_baseline = sorted.back();
    row.median_baseline = sorted[sorted.size() / 2];
    row.rank = 1;
    for (const auto b : baselines) {
      row.rank += b > row.pipeline_score ? 1 : 0;
    }
    const bool all_zero =
        row.pipeline_score == 0.0 && row.best_baseline == 0.0;
    if (all_zero) {
      report.excluded_all_zero.push_back(name);
      continue;
    }
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const BenchmarkRow& a, const BenchmarkRow& b) {
              if (a.pipeline_score != b.pipeline_score) {
                return a.pipeline_score > b.pipeline_score;
              }
              return a.name < b.name;
            });
  return report;
}

std::string CrossComparison::to_csv() const {
  std::ostringstream out;
  out << "# mean evaluation score of each trained pipeline under each "
         "figure of merit\n";
  out << "trained_for," << fom_ids[0] << "," << fom_ids[1] << "\n";
  for (int i = 0; i < 2; ++i) {
    out << fom_ids[static_cast<std::size_t>(i)];
    for (int j = 0; j < 2; ++j) {
      out << ","
          << cell[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    out << "\n";
  }
  return out.str();
}

CrossComparison
fom_cross_comparison(const std::vector<std::pair<std::string, Circuit>>& corpus,
                     const PredictorBundle& bundle, const std::string& fom_a,
                     const std::string& fom_b) {
  CrossComparison table;
  table.fom_ids = {fom_a, fom_b};
  const std::array<FigureOfMerit, 2> foms{make_fom(fom_a), make_fom(fom_b)};
  std::array<std::array<double, 2>, 2> totals{};
  std::array<std::array<std::size_t, 2>, 2> counts{};
  for (std::size_t trained = 0; trained < 2; ++trained) {
    for (const auto& [name, circuit] : corpus) {
      CompileOutcome outcome;
      try {
        outcome = predict_and_compile(circuit, bundle, table.fom_ids[trained]);
      } catch (const BundleError&) {
        continue; // fits no device; skipped under both scorings
      }
      const auto& device = bundle.device(outcome.device_id);
      for (std::size_t scored = 0; scored < 2; ++scored) {
        totals[trained][scored] +=
            foms[scored].score(outcome.circuit, device, outcome.mapping);
        ++counts[trained][scored];
      }
    }
  }
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      table.cell[i][j] = counts[i][j] == 0
                             ? 0.0
                             : totals[i][j] / static_cast<double>(counts[i][j]);
    }
  }
  return table;
}

std::string DeviceDistribution::to_csv() const {
  std::ostringstream out;
  out << "# how often each device wins, grouped by how many devices fit\n";
  out << "fit_count,device,wins\n";
  for (const auto& [group, devices] : histogram) {
    for (const auto& [device, wins] : devices) {
      out << group << "," << device << "," << wins << "\n";
    }
  }
  return out.str();
}

DeviceDistribution device_distribution_report(
    const std::vector<std::pair<std::string, Circuit>>& corpus,
    const PredictorBundle& bundle, const std::string& fom_id) {
  DeviceDistribution dist;
  for (const auto& [name, circuit] : corpus) {
    int fit_count = 0;
    std::string best_device;
    double best_score = -1.0;
    std::uint32_t best_qubits = 0;
    for (const auto& d : bundle.fleet) {
      if (circuit.num_qubits > d.num_qubits) {
        continue;
      }
      ++fit_count;
      const auto compiled =
          compile_with_policy(circuit, bundle.policy_for(fom_id, d.id), d);
      const bool better =
          compiled.score > best_score ||
          (compiled.score == best_score &&
           (d.num_qubits < best_qubits ||
            (d.num_qubits == best_qubits && d.id < best_device)));
      if (best_device.empty() || better) {
        best_device = d.id;
        best_score = compiled.score;
        best_qubits = d.num_qubits;
      }
    }
    if (fit_count > 0) {
      ++dist.histogram[fit_count][best_device];
    }
  }
  return dist;
}

std::string IsolatedReport::to_csv() const {
  std::ostringstream out;
  out << "# per-benchmark scores of the fixed baselines, the device policy, "
         "and the full predict-then-compile pipeline\n";
  out << "name,device,l1,l2,rl,full\n";
  for (const auto& row : rows) {
    out << csv_escape(row.name) << "," << row.device_id << "," << row.l1 << ","
        << row.l2 << "," << row.rl << "," << row.full_pipeline << "\n";
  }
  return out.str();
}

IsolatedReport
isolated_evaluations(const std::vector<std::pair<std::string, Circuit>>& corpus,
                     const PredictorBundle& bundle, const std::string& fom_id,
                     IsolationMode mode) {
  const auto fom = make_fom(fom_id);
  IsolatedReport report;
  report.mode = mode;

  const DeviceModel* largest = nullptr;
  for (const auto& d : bundle.fleet) {
    if (largest == nullptr || d.num_qubits > largest->num_qubits) {
      largest = &d;
    }
  }

  for (const auto& [name, circuit] : corpus) {
    CompileOutcome full;
    try {
      full = predict_and_compile(circuit, bundle, fom_id);
    } catch (const BundleError&) {
      continue;
    }
    const DeviceModel& target = mode == IsolationMode::FixedDevice
                                    ? *largest
                                    : bundle.device(full.device_id);
    if (circuit.num_qubits > target.num_qubits) {
      continue;
    }
    IsolatedRow row;
    row.name = name;
    row.device_id = target.id;
    for (const auto level : {BaselineLevel::L1, BaselineLevel::L2}) {
      double score = 0.0;
      try {
        const auto result = baseline_pipeline(circuit, target, level);
        score = fom.score(result.circuit, target, result.mapping);
      } catch (const PassError&) {
        score = 0.0;
      }
      (level == BaselineLevel::L1 ? row.l1 : row.l2) = score;
    }
    if (mode == IsolationMode::FixedCompiler) {
      row.rl = full.score; // same device, same policy: the full pipeline
    } else {
      row.rl = compile_with_policy(circuit,
                                   bundle.policy_for(fom_id, target.id),
                                   target)
                   .score;
    }
    row.full_pipeline = full.score;
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const IsolatedRow& a, const IsolatedRow& b) {
              if (a.full_pipeline != b.full_pipeline) {
                return a.full_pipeline > b.full_pipeline;
              }
              return a.name < b.name;
            });
  return report;
}

} // namespace qcomp
