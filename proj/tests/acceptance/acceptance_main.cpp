// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its runtime; the process exits nonzero if any criterion fails.

#include "helpers.hpp"
#include "qcomp/corpus.hpp"
#include "qcomp/device.hpp"
#include "qcomp/features.hpp"
#include "qcomp/fom.hpp"
#include "qcomp/forest.hpp"
#include "qcomp/metrics.hpp"
#include "qcomp/passes.hpp"
#include "qcomp/pipeline.hpp"
#include "qcomp/policy.hpp"
#include "qcomp/rl_env.hpp"
#include "qcomp/rng.hpp"
#include "qcomp/sim.hpp"
#include "qcomp/store.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

using namespace qcomp;
using qcomp::testing::enumerate_critical_paths;
using qcomp::testing::example_circuit;
using qcomp::testing::line_device;
using qcomp::testing::random_circuit;

namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<Criterion> g_results;

template <typename Fn> void run_criterion(int id, const std::string& name, Fn fn) {
  Criterion c;
  c.id = id;
  c.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.pass = fn(c.detail);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  std::printf("%s criterion %2d: %s (%.1fs)%s%s\n",
              c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds,
              c.detail.empty() ? "" : " -- ", c.detail.c_str());
  std::fflush(stdout);
  g_results.push_back(std::move(c));
}

// Shared desk-scale bundle configuration. All thresholds and budgets are
// pinned here, not tuned at runtime.
BundleConfig acceptance_config() {
  BundleConfig cfg;
  cfg.train_spec.min_qubits = 2;
  cfg.train_spec.max_qubits = 12;
  cfg.train_spec.instances_per_size = 7;
  cfg.train_spec.seed = 2026;
  cfg.rl.seed = 2026;
  cfg.rl.iterations = 300;
  cfg.rl.batch_episodes = 24;
  cfg.rl.max_eval_circuits = 10;
  cfg.rl_max_qubits = 8;
  cfg.forest.seed = 2026;
  return cfg;
}

CorpusSpec evaluation_spec() {
  CorpusSpec spec; // all seven families, ghz included
  spec.min_qubits = 2;
  spec.max_qubits = 12;
  spec.instances_per_size = 2;
  spec.seed = 990;
  return spec;
}

// Random circuits sized to fit a device, used for policy-vs-oracle and
// policy-vs-baseline checks.
std::vector<Circuit> seeded_circuits(std::size_t count, std::uint32_t min_q,
                                     std::uint32_t max_q, std::uint64_t seed,
                                     bool measured = true) {
  std::vector<Circuit> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = min_q + static_cast<std::uint32_t>(rng.index(max_q - min_q + 1));
    const auto ops = 4 + rng.index(12);
    out.push_back(random_circuit(n, ops, rng.next(), measured));
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return {buf};
}

} // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fleet = default_fleet();
  const auto cfg = acceptance_config();
  const auto bundle_dir = fs::absolute("acceptance_bundle").string();

  std::printf("training/resuming the acceptance bundle under %s\n",
              bundle_dir.c_str());
  std::fflush(stdout);
  const auto bundle_start = std::chrono::steady_clock::now();
  const auto bundle = train_bundle(fleet, cfg, bundle_dir, nullptr);
  std::printf("bundle ready (%.1fs)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            bundle_start)
                  .count());
  std::fflush(stdout);

  const auto eval_corpus = generate_corpus(evaluation_spec());

  // 1. Semantic correctness of every pipeline and trained policy.
  run_criterion(1, "semantic equivalence across pipelines and policies",
                [&](std::string& detail) {
    std::size_t checks = 0;
    Rng rng(20261);
    for (int i = 0; i < 200; ++i) {
      const auto n = 2 + static_cast<std::uint32_t>(rng.index(5));
      const auto circuit =
          random_circuit(n, 4 + rng.index(12), rng.next(), true);
      for (const auto& d : fleet) {
        if (circuit.num_qubits > d.num_qubits) {
          continue;
        }
        for (const auto level : {BaselineLevel::L1, BaselineLevel::L2}) {
          const auto result = baseline_pipeline(circuit, d, level);
          ++checks;
          if (!equivalent_up_to_layout(circuit, result.circuit,
                                       result.mapping)) {
            detail = "baseline mismatch on device " + d.id;
            return false;
          }
        }
        const auto compiled = compile_with_policy(
            circuit, bundle.policy_for("expected_fidelity", d.id), d);
        ++checks;
        if (!equivalent_up_to_layout(circuit, compiled.circuit,
                                     compiled.mapping)) {
          detail = "policy compile mismatch on device " + d.id;
          return false;
        }
      }
    }
    detail = std::to_string(checks) + " equivalence checks";
    return true;
  });

  // 2. Executability of every predict-and-compile output.
  run_criterion(2, "predict-and-compile outputs are executable",
                [&](std::string& detail) {
    std::size_t total = 0;
    std::size_t fallbacks = 0;
    for (const auto& fom_id : cfg.fom_ids) {
      for (const auto& [name, circuit] : eval_corpus) {
        const auto outcome = predict_and_compile(circuit, bundle, fom_id);
        const auto& device = bundle.device(outcome.device_id);
        const auto status =
            compute_status(outcome.circuit, device, outcome.mapping);
        ++total;
        fallbacks += outcome.used_fallback ? 1 : 0;
        if (!status.executable()) {
          detail = name + " not executable on " + outcome.device_id;
          return false;
        }
      }
    }
    detail = std::to_string(total) + " compiles, " +
             std::to_string(fallbacks) + " fallbacks";
    return true;
  });

  // 3. Figure-of-merit exactness against independent oracles.
  run_criterion(3, "figure-of-merit exactness", [&](std::string& detail) {
    const auto& d = fleet[0]; // sc-8
    std::vector<QubitPair> pairs(d.coupling.begin(), d.coupling.end());
    Rng rng(20263);
    MappingState identity;
    identity.layout = std::vector<std::uint32_t>{};
    for (std::uint32_t q = 0; q < d.num_qubits; ++q) {
      identity.layout->push_back(q);
    }
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Circuit c;
      c.num_qubits = d.num_qubits;
      const auto ops = 1 + rng.index(60);
      for (std::size_t k = 0; k < ops; ++k) {
        if (rng.uniform() < 0.35) {
          const auto& pair = pairs[rng.index(pairs.size())];
          c.ops.push_back(make_op(Gate::Cx, pair.first, pair.second));
        } else {
          const Gate g = rng.uniform() < 0.4   ? Gate::X
                         : rng.uniform() < 0.5 ? Gate::Sx
                                               : Gate::Rz;
          const auto q = static_cast<std::uint32_t>(rng.index(d.num_qubits));
          c.ops.push_back(g == Gate::Rz ? make_op(g, rng.uniform(-3, 3), q)
                                        : make_op(g, q));
        }
      }
      for (std::uint32_t q = 0; q < d.num_qubits; ++q) {
        if (rng.uniform() < 0.5) {
          c.measurements.push_back({q, q});
        }
      }
      const auto report = expected_fidelity(c, d, identity);
      if (!report.reason.empty()) {
        detail = "unexpected non-executable sample";
        return false;
      }
      double naive = 1.0;
      for (const auto& [op, f] : report.per_gate) {
        naive *= f;
      }
      for (const auto& [q, f] : report.per_readout) {
        naive *= f;
      }
      worst = std::max(worst, std::abs(report.total - naive));
      if (std::abs(report.total - naive) >= 1e-12) {
        detail = "log-domain drift " + std::to_string(report.total - naive);
        return false;
      }
    }
    for (int i = 0; i < 1000; ++i) {
      const auto c = random_circuit(2 + rng.index(7), 4 + rng.index(16),
                                    rng.next(), i % 2 == 0);
      const auto m = compute_metrics(c);
      const auto [depth, twoq] = enumerate_critical_paths(c);
      if (m.depth != depth || m.critical_path_two_qubit_count != twoq) {
        detail = "critical-path mismatch";
        return false;
      }
      const double expect =
          m.two_qubit_count == 0
              ? 1.0
              : 1.0 - static_cast<double>(twoq) /
                          static_cast<double>(m.two_qubit_count);
      if (critical_depth_score(c) != expect) {
        detail = "critical-depth score mismatch";
        return false;
      }
    }
    detail = "max log-domain deviation " + std::to_string(worst);
    return true;
  });

  // 4. Worked example reproduction on the 3-qubit line device.
  run_criterion(4, "worked example compiles to 2 single-qubit gates + 4 CX",
                [&](std::string& detail) {
    const auto d = line_device(3);
    const auto result =
        baseline_pipeline(example_circuit(), d, BaselineLevel::L2);
    std::size_t single = 0;
    std::size_t cx = 0;
    std::size_t swaps = 0;
    for (const auto& op : result.circuit.ops) {
      if (op.gate == Gate::Cx) {
        ++cx;
      } else if (op.gate == Gate::Swap) {
        ++swaps;
      } else {
        ++single;
      }
    }
    const bool shape_ok = single == 2 && cx == 4 && swaps == 0;
    const bool semantics_ok = equivalent_up_to_layout(
        example_circuit(), result.circuit, result.mapping);
    detail = std::to_string(single) + " single-qubit, " + std::to_string(cx) +
             " cx, " + std::to_string(swaps) + " swap";
    return shape_ok && semantics_ok;
  });

  // 5. Greedy policy compiles close to the brute-force oracle.
  run_criterion(5, "policy within 95% of brute force on 80% of circuits",
                [&](std::string& detail) {
    const auto fom = fidelity_fom();
    std::ostringstream per_device;
    bool all_ok = true;
    for (const auto& d : fleet) {
      const auto circuits = seeded_circuits(20, 2, 5, 5200 + fnv1a64(d.id));
      int hits = 0;
      for (const auto& c : circuits) {
        const auto greedy =
            compile_with_policy(c, bundle.policy_for("expected_fidelity", d.id), d);
        const auto oracle = brute_force_best(c, d, fom, 4);
        if (oracle.best_score <= 0.0 ||
            greedy.score >= 0.95 * oracle.best_score) {
          ++hits;
        }
      }
      const double rate = hits / 20.0;
      per_device << d.id << "=" << fmt(rate) << " ";
      all_ok &= rate >= 0.8;
    }
    detail = per_device.str();
    return all_ok;
  });

  // 6. Policy matches or beats the better fixed baseline per device.
  run_criterion(6, "policy >= best baseline on 70% of held-out circuits",
                [&](std::string& detail) {
    std::ostringstream per_device;
    bool all_ok = true;
    for (const auto& fom_id : cfg.fom_ids) {
      const auto fom = make_fom(fom_id);
      for (const auto& d : fleet) {
        const auto circuits = seeded_circuits(
            50, 2, std::min<std::uint32_t>(8, d.num_qubits),
            6400 + fnv1a64(d.id + fom_id));
        int wins = 0;
        for (const auto& c : circuits) {
          const auto policy_score =
              compile_with_policy(c, bundle.policy_for(fom_id, d.id), d).score;
          double best_baseline = 0.0;
          for (const auto level : {BaselineLevel::L1, BaselineLevel::L2}) {
            const auto result = baseline_pipeline(c, d, level);
            best_baseline = std::max(
                best_baseline, fom.score(result.circuit, d, result.mapping));
          }
          wins += policy_score >= best_baseline - 1e-12 ? 1 : 0;
        }
        const double rate = wins / 50.0;
        per_device << fom_id[0] << ":" << d.id << "=" << fmt(rate) << " ";
        all_ok &= rate >= 0.7;
      }
    }
    detail = per_device.str();
    return all_ok;
  });

  // 7. Classifier quality against the stored ground truth.
  run_criterion(7, "classifier top-1 >= 0.55 and top-3 containment >= 0.85",
                [&](std::string& detail) {
    const auto fom = make_fom("expected_fidelity");
    const auto train_corpus = generate_corpus(cfg.train_spec);
    ResultStore store(bundle.store_path);
    const auto samples =
        generate_labels(train_corpus, bundle.fleet,
                        bundle.policies.at("expected_fidelity"), fom, store);
    if (samples.size() < 300) {
      detail = "only " + std::to_string(samples.size()) + " labeled samples";
      return false;
    }
    const auto& forest = bundle.forest_for("expected_fidelity");
    const auto top1 = forest.report.heldout_top1;

    // Score-based top-3 containment on the held-out slice.
    std::map<std::string, const TrainingSample*> by_hash;
    std::map<std::string, const Circuit*> circuit_by_hash;
    for (std::size_t i = 0, j = 0; i < train_corpus.size(); ++i) {
      const auto hash = circuit_hash(train_corpus[i].second);
      if (j < samples.size() && samples[j].circuit_hash == hash) {
        by_hash[to_hex(samples[j].content_hash())] = &samples[j];
        circuit_by_hash[to_hex(samples[j].content_hash())] =
            &train_corpus[i].second;
        ++j;
      }
    }
    std::size_t contained = 0;
    std::size_t heldout = 0;
    for (const auto& hash : forest.report.heldout_hashes) {
      const auto it = by_hash.find(hash);
      if (it == by_hash.end()) {
        continue;
      }
      ++heldout;
      const auto ranking = predict_device(*circuit_by_hash.at(hash), forest);
      const double achieved =
          it->second->per_device_scores.at(ranking.front().first);
      std::vector<double> scores;
      for (const auto& [dev, score] : it->second->per_device_scores) {
        scores.push_back(score);
      }
      std::sort(scores.rbegin(), scores.rend());
      const double third = scores[std::min<std::size_t>(2, scores.size() - 1)];
      contained += achieved >= third - 1e-12 ? 1 : 0;
    }
    const double top3 =
        heldout == 0 ? 0.0
                     : static_cast<double>(contained) / static_cast<double>(heldout);
    detail = "samples=" + std::to_string(samples.size()) +
             " top1=" + fmt(top1) + " top3=" + fmt(top3) +
             " heldout=" + std::to_string(heldout);
    return top1 >= 0.55 && top3 >= 0.85;
  });

  // 8. Figure-of-merit specificity: diagonal dominates each column.
  run_criterion(8, "cross-comparison diagonal dominates its columns",
                [&](std::string& detail) {
    const auto table = fom_cross_comparison(eval_corpus, bundle);
    detail = "fid-trained " + fmt(table.cell[0][0]) + "/" +
             fmt(table.cell[0][1]) + ", cd-trained " + fmt(table.cell[1][0]) +
             "/" + fmt(table.cell[1][1]);
    return table.cell[0][0] > table.cell[1][0] &&
           table.cell[1][1] > table.cell[0][1];
  });

  // 9. GHZ generalization with GHZ held out from training.
  run_criterion(9, "ghz: pipeline >= every baseline; line baselines are 0",
                [&](std::string& detail) {
    const auto fom = make_fom("critical_depth");
    for (std::uint32_t n = 3; n <= 12; ++n) {
      const auto ghz = make_ghz(n);
      const auto outcome = predict_and_compile(ghz, bundle, "critical_depth");
      double best_baseline = 0.0;
      for (const auto& d : fleet) {
        if (ghz.num_qubits > d.num_qubits) {
          continue;
        }
        for (const auto level : {BaselineLevel::L1, BaselineLevel::L2}) {
          const auto result = baseline_pipeline(ghz, d, level);
          const auto score = fom.score(result.circuit, d, result.mapping);
          best_baseline = std::max(best_baseline, score);
          if (d.technology == Technology::Superconducting && score != 0.0) {
            detail = "ghz-" + std::to_string(n) + " baseline on " + d.id +
                     " scored " + fmt(score);
            return false;
          }
        }
      }
      if (outcome.score < best_baseline) {
        detail = "ghz-" + std::to_string(n) + " pipeline " +
                 fmt(outcome.score) + " < baseline " + fmt(best_baseline);
        return false;
      }
    }
    detail = "ghz sizes 3..12";
    return true;
  });

  // 10. Determinism and persistence.
  run_criterion(10, "determinism, exact round-trips, zero-work resume",
                [&](std::string& detail) {
    // (a) Retraining a policy with identical seeds is bitwise identical.
    const auto d = line_device(4, "det-check");
    TrainConfig small;
    small.seed = 77;
    small.iterations = 6;
    small.batch_episodes = 8;
    std::vector<Circuit> corpus;
    for (std::uint64_t s = 0; s < 6; ++s) {
      corpus.push_back(random_circuit(3, 8, 300 + s, true));
    }
    const auto p1 = train_policy(d, fidelity_fom(), corpus, small);
    const auto p2 = train_policy(d, fidelity_fom(), corpus, small);
    if (policy_to_json_text(p1) != policy_to_json_text(p2)) {
      detail = "policy retraining differs";
      return false;
    }
    // (b) Policy/forest/store files round-trip exactly.
    const auto policy_path =
        fs::path(bundle_dir) / "policies" / "expected_fidelity" / "sc-8.json";
    std::ifstream pin(policy_path);
    std::ostringstream ptext;
    ptext << pin.rdbuf();
    if (policy_to_json_text(load_policy(policy_path.string())) != ptext.str()) {
      detail = "policy file round-trip differs";
      return false;
    }
    const auto forest_path =
        fs::path(bundle_dir) / "forest" / "expected_fidelity.json";
    std::ifstream fin(forest_path);
    std::ostringstream ftext;
    ftext << fin.rdbuf();
    if (forest_to_json_text(load_forest(forest_path.string())) != ftext.str()) {
      detail = "forest file round-trip differs";
      return false;
    }
    {
      ResultStore store(bundle.store_path);
      ResultStore reloaded(bundle.store_path);
      if (reloaded.size() != store.size()) {
        detail = "store reload differs";
        return false;
      }
    }
    // (c) Resume performs zero redundant work on unchanged inputs.
    std::ostringstream log;
    train_bundle(fleet, cfg, bundle_dir, &log);
    if (log.str().find("trained") != std::string::npos) {
      detail = "resume retrained an artifact";
      return false;
    }
    detail = "bitwise retrain + exact round-trips + clean resume";
    return true;
  });

  // 11. Analytic policy gradient vs central finite differences.
  run_criterion(11, "policy gradient matches finite differences",
                [&](std::string& detail) {
    const auto d = line_device(3);
    PolicyModel p = init_policy(d.id, "expected_fidelity", 3);
    Rng rng(17);
    for (auto& row : p.weights) {
      for (auto& w : row) {
        w = 0.2 * rng.normal();
      }
    }
    for (auto& w : p.value_weights) {
      w = 0.2 * rng.normal();
    }
    std::vector<PgStep> batch;
    auto e = make_episode(example_circuit(), d, fidelity_fom(), 5);
    Rng action_rng(23);
    while (!e.done) {
      const auto mask = action_mask(e);
      const auto obs =
          make_observation(e.circuit, e.status, e.mapping.has_layout());
      const auto probs = masked_probabilities(p.logits(obs), mask);
      std::size_t action = 0;
      double draw = action_rng.uniform();
      for (std::size_t a = 0; a < probs.size(); ++a) {
        if (!mask[a]) {
          continue;
        }
        action = a;
        draw -= probs[a];
        if (draw <= 0.0) {
          break;
        }
      }
      PgStep record;
      record.observation = obs;
      record.mask = mask;
      record.action = action;
      record.logp_old = std::log(probs[action]) + 0.01;
      record.advantage = action_rng.normal();
      record.return_value = action_rng.uniform();
      batch.push_back(record);
      step(e, action);
    }
    TrainConfig tc;
    PgGradients grads;
    pg_loss(p, batch, tc, &grads);
    const double h = 1e-6;
    double max_rel = 0.0;
    const auto check_param = [&](double& param, double analytic) {
      const double original = param;
      param = original + h;
      const double up = pg_loss(p, batch, tc, nullptr);
      param = original - h;
      const double down = pg_loss(p, batch, tc, nullptr);
      param = original;
      const double numeric = (up - down) / (2.0 * h);
      const double scale =
          std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      max_rel = std::max(max_rel, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t a = 0; a < p.weights.size(); ++a) {
      for (std::size_t i = 0; i < p.weights[a].size(); ++i) {
        check_param(p.weights[a][i], grads.weights[a][i]);
      }
      check_param(p.bias[a], grads.bias[a]);
    }
    for (std::size_t i = 0; i < p.value_weights.size(); ++i) {
      check_param(p.value_weights[i], grads.value_weights[i]);
    }
    check_param(p.value_bias, grads.value_bias);
    detail = "max relative error " + std::to_string(max_rel);
    return max_rel < 1e-4;
  });

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  int failures = 0;
  for (const auto& c : g_results) {
    failures += c.pass ? 0 : 1;
  }
  std::printf("acceptance: %zu criteria, %d failed, %.1fs total\n",
              g_results.size(), failures, total);
  return failures == 0 ? 0 : 1;
}
