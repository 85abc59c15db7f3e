// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qcomp/policy.hpp"
#include "qcomp/rl_env.hpp"
#include "qcomp/sim.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace qcomp;
using qcomp::testing::example_circuit;
using qcomp::testing::line_device;
using qcomp::testing::random_circuit;

TEST_CASE("compute_status walks the three MDP states") {
  const auto d = line_device(3);
  MappingState no_layout;

  SUBCASE("non-native circuit") {
    const auto status = compute_status(example_circuit(), d, no_layout);
    CHECK_FALSE(status.only_native);
    CHECK_FALSE(status.respects_topology);
  }
  SUBCASE("native but unmapped") {
    const auto native = synthesize_to_native(example_circuit(), d);
    const auto status = compute_status(native, d, no_layout);
    CHECK(status.only_native);
    CHECK_FALSE(status.respects_topology);
  }
  SUBCASE("executable after mapping") {
    const auto native = synthesize_to_native(example_circuit(), d);
    MappingState ms;
    auto laid = layout_trivial(native, d, ms);
    auto routed = route_basic(laid.circuit, d, laid.mapping);
    const auto status = compute_status(routed.circuit, d, routed.mapping);
    CHECK(status.only_native);
    CHECK(status.respects_topology);
    CHECK(status.executable());
  }
}

TEST_CASE("action mask follows the MDP transitions") {
  const auto d = line_device(3);
  const auto fom = fidelity_fom();
  auto e = make_episode(example_circuit(), d, fom, 1);

  const auto mask_ids = [&](const std::vector<bool>& mask) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) {
        ids.push_back(pass_catalog()[i].id);
      }
    }
    return ids;
  };

  // Fresh episode on a non-native circuit: synthesis yes, terminate no.
  auto mask = action_mask(e);
  CHECK(mask[pass_index("synth_native")]);
  CHECK(mask[pass_index("opt_consolidate_2q")]);
  CHECK_FALSE(mask[pass_index("terminate")]);
  CHECK_FALSE(mask[pass_index("layout_trivial")]);
  CHECK_FALSE(mask[pass_index("route_basic")]);
  CHECK(mask_ids(mask).size() == 2);

  // Synthesis advances to (native, unmapped); routing still masked.
  CHECK(step(e, pass_index("synth_native")) == 0.0);
  CHECK(e.status.only_native);
  mask = action_mask(e);
  CHECK(mask[pass_index("layout_trivial")]);
  CHECK(mask[pass_index("map_combined")]);
  CHECK(mask[pass_index("opt_cancel_inverses")]);
  CHECK_FALSE(mask[pass_index("route_basic")]); // no layout yet
  CHECK_FALSE(mask[pass_index("terminate")]);

  // Layout makes routing legal.
  CHECK(step(e, pass_index("layout_trivial")) == 0.0);
  mask = action_mask(e);
  CHECK(mask[pass_index("route_basic")]);

  // Routing reaches the executable state; terminate unlocks.
  CHECK(step(e, pass_index("route_lookahead")) == 0.0);
  CHECK(e.status.executable());
  mask = action_mask(e);
  CHECK(mask[pass_index("terminate")]);
  CHECK(mask[pass_index("opt_cancel_inverses")]);
  CHECK_FALSE(mask[pass_index("layout_trivial")]);

  // Terminate pays the figure of merit.
  const double reward = step(e, pass_index("terminate"));
  CHECK(reward > 0.0);
  CHECK(e.done);
  CHECK_THROWS_AS(action_mask(e), EpisodeError);
}

TEST_CASE("masked actions are rejected") {
  const auto d = line_device(3);
  auto e = make_episode(example_circuit(), d, fidelity_fom(), 1);
  CHECK_THROWS_AS(step(e, pass_index("terminate")), EpisodeError);
}

TEST_CASE("oversized circuits cannot form an episode") {
  Circuit c;
  c.num_qubits = 9;
  CHECK_THROWS_AS(make_episode(c, line_device(3), fidelity_fom(), 1),
                  EpisodeError);
}

TEST_CASE("episodes terminate at the step cap with sparse rewards") {
  const auto d = line_device(3);
  auto e = make_episode(example_circuit(), d, fidelity_fom(), 1, 6);
  double total = 0.0;
  int steps = 0;
  while (!e.done) {
    // Repeatedly apply the first legal action; the cap must end this.
    const auto mask = action_mask(e);
    std::size_t action = 0;
    while (!mask[action]) {
      ++action;
    }
    const double r = step(e, action);
    ++steps;
    if (!e.done) {
      CHECK(r == 0.0);
    }
    total += r;
  }
  CHECK(steps <= 6);
  CHECK(total >= 0.0);
}

TEST_CASE("general optimization can regress the executable state") {
  // swap native on this device so consolidation can produce a non-native
  // gate on the line device later.
  const auto d = line_device(2);
  Circuit c;
  c.num_qubits = 2;
  c.ops.push_back(make_op(Gate::Cx, 0u, 1u));
  c.ops.push_back(make_op(Gate::Cx, 1u, 0u));
  c.ops.push_back(make_op(Gate::Cx, 0u, 1u));
  auto e = make_episode(c, d, fidelity_fom(), 1);
  CHECK(step(e, pass_index("layout_trivial")) == 0.0);
  CHECK(e.status.executable());
  CHECK(step(e, pass_index("opt_consolidate_2q")) == 0.0);
  CHECK_FALSE(e.status.only_native); // 3 CX became a (non-native) SWAP
  const auto mask = action_mask(e);
  CHECK(mask[pass_index("synth_native")]);
  CHECK_FALSE(mask[pass_index("terminate")]);
}

TEST_CASE("observation layout and ranges") {
  const auto d = line_device(3);
  const auto c = example_circuit();
  const auto status = compute_status(c, d, MappingState{});
  const auto obs = make_observation(c, status, false);
  REQUIRE(obs.size() == observation_dim());
  for (const auto v : obs) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(obs[7] == 1.0); // non-native one-hot
  CHECK(obs[8] == 0.0);
  CHECK(obs[9] == 0.0);
  CHECK(obs[10] == 0.0); // no layout
}

TEST_CASE("masked softmax puts zero mass on masked actions") {
  std::vector<double> logits(15, 0.0);
  logits[3] = 2.0;
  std::vector<bool> mask(15, false);
  mask[3] = true;
  mask[7] = true;
  const auto probs = masked_probabilities(logits, mask);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!mask[i]) {
      CHECK(probs[i] == 0.0);
    }
    total += probs[i];
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(probs[3] > probs[7]);
}

TEST_CASE("policy gradient matches central finite differences") {
  const auto d = line_device(3);
  // Frozen batch from random-policy rollouts on the example circuit.
  PolicyModel p = init_policy(d.id, "expected_fidelity", 3);
  Rng rng(17);
  for (auto& row : p.weights) {
    for (auto& w : row) {
      w = 0.2 * rng.normal();
    }
  }
  for (auto& b : p.bias) {
    b = 0.1 * rng.normal();
  }
  for (auto& w : p.value_weights) {
    w = 0.2 * rng.normal();
  }
  p.value_bias = 0.05;

  std::vector<PgStep> batch;
  auto e = make_episode(example_circuit(), d, fidelity_fom(), 5);
  Rng action_rng(23);
  while (!e.done) {
    const auto mask = action_mask(e);
    const auto obs = make_observation(e.circuit, e.status, e.mapping.has_layout());
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
    PgStep step_record;
    step_record.observation = obs;
    step_record.mask = mask;
    step_record.action = action;
    // Slightly offset old log-probs so ratios differ from 1 but stay well
    // inside the clip interval (the objective is smooth there).
    step_record.logp_old = std::log(probs[action]) + 0.01;
    step_record.advantage = action_rng.normal();
    step_record.return_value = action_rng.uniform();
    batch.push_back(step_record);
    step(e, action);
  }
  REQUIRE(batch.size() >= 2);

  TrainConfig cfg;
  cfg.clip = 0.2;
  cfg.entropy_coef = 0.01;
  cfg.value_coef = 0.5;

  PgGradients grads;
  pg_loss(p, batch, cfg, &grads);

  const double h = 1e-6;
  double max_rel = 0.0;
  const auto check_param = [&](double& param, double analytic) {
    const double original = param;
    param = original + h;
    const double up = pg_loss(p, batch, cfg, nullptr);
    param = original - h;
    const double down = pg_loss(p, batch, cfg, nullptr);
    param = original;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
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
  CHECK(max_rel < 1e-4);
}

TEST_CASE("policy save/load round-trips bitwise") {
  PolicyModel p = init_policy("line", "expected_fidelity", 9);
  Rng rng(5);
  for (auto& row : p.weights) {
    for (auto& w : row) {
      w = rng.normal();
    }
  }
  p.best_eval = 0.875;
  p.trained_iterations = 17;

  const auto dir = std::filesystem::temp_directory_path() / "qcomp_policy";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "p.json").string();
  save_policy(p, path);
  const auto back = load_policy(path);
  CHECK(back.weights == p.weights);
  CHECK(back.bias == p.bias);
  CHECK(back.value_weights == p.value_weights);
  CHECK(back.value_bias == p.value_bias);
  CHECK(back.device_id == p.device_id);
  CHECK(policy_to_json_text(back) == policy_to_json_text(p));

  SUBCASE("catalog mismatch is rejected") {
    auto text = policy_to_json_text(p);
    const auto pos = text.find(catalog_version());
    text.replace(pos, catalog_version().size(), "deadbeefdeadbeef");
    CHECK_THROWS_WITH_AS(static_cast<void>(policy_from_json_text(text)),
                         doctest::Contains("catalog"), PolicyError);
  }
  SUBCASE("truncated file is a corrupt-file error") {
    const auto text = policy_to_json_text(p);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(policy_from_json_text(text.substr(0, 40))),
        doctest::Contains("corrupt"), PolicyError);
  }
}

TEST_CASE("zero-iteration policy still compiles via masking") {
  const auto d = line_device(3);
  TrainConfig cfg;
  cfg.iterations = 0;
  const auto p = train_policy(d, fidelity_fom(), {example_circuit()}, cfg);
  const auto result = compile_with_policy(example_circuit(), p, d);
  const auto status = compute_status(result.circuit, d, result.mapping);
  CHECK(status.executable());
  CHECK(result.score >= 0.0);
}

TEST_CASE("training is deterministic and beats the random policy") {
  const auto d = line_device(5);
  std::vector<Circuit> corpus;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    corpus.push_back(random_circuit(3 + seed % 3, 6 + seed % 10, 40 + seed, true));
  }
  TrainConfig cfg;
  cfg.iterations = 60;
  cfg.batch_episodes = 16;

  const auto trained = train_policy(d, fidelity_fom(), corpus, cfg);
  const auto again = train_policy(d, fidelity_fom(), corpus, cfg);
  CHECK(policy_to_json_text(trained) == policy_to_json_text(again));

  // Mean greedy score of the trained policy vs. seeded random-legal rollouts.
  const auto random_policy = init_policy(d.id, "expected_fidelity", 0);
  double trained_mean = 0.0;
  double random_mean = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    trained_mean += compile_with_policy(corpus[i], trained, d).score;
    random_mean +=
        compile_with_policy(corpus[i], random_policy, d, CompileMode::Sample,
                            1000 + i)
            .score;
  }
  CHECK(trained_mean > random_mean);
}

TEST_CASE("greedy compile is deterministic and logs its passes") {
  const auto d = line_device(3);
  TrainConfig cfg;
  cfg.iterations = 0;
  const auto p = train_policy(d, fidelity_fom(), {example_circuit()}, cfg);
  const auto a = compile_with_policy(example_circuit(), p, d);
  const auto b = compile_with_policy(example_circuit(), p, d);
  CHECK(a.circuit == b.circuit);
  CHECK(a.pass_log == b.pass_log);
  CHECK(!a.pass_log.empty());
}

TEST_CASE("mask soundness: any unmasked action steps without errors") {
  const auto sc = line_device(4);
  const auto ion = qcomp::testing::ion_device(4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto* d = seed % 2 == 0 ? &sc : &ion;
    auto e = make_episode(random_circuit(3, 8, 2200 + seed, true), *d,
                          fidelity_fom(), seed, 25);
    Rng rng(seed);
    while (!e.done) {
      const auto mask = action_mask(e);
      std::vector<std::size_t> legal;
      for (std::size_t a = 0; a < mask.size(); ++a) {
        if (mask[a]) {
          legal.push_back(a);
        }
      }
      REQUIRE(!legal.empty());
      const auto action = legal[rng.index(legal.size())];
      const bool was_native = e.status.only_native;
      CHECK_NOTHROW(step(e, action));
      // Transition consistency with the action kind.
      const auto kind = pass_catalog()[action].kind;
      if (kind == PassKind::Synthesis) {
        CHECK(e.status.only_native);
      }
      if (kind == PassKind::CombinedMapping && was_native) {
        CHECK(e.status.executable());
      }
      if (kind == PassKind::OptPreserving && was_native) {
        CHECK(e.status.only_native);
      }
    }
    CHECK(e.steps_taken <= 25);
  }
}

TEST_CASE("compile executability holds at scale with bounded fallbacks") {
  // Untrained policies already compile via masking and cycle avoidance;
  // every result must be executable and fallbacks must stay under 5%.
  const auto sc = line_device(6);
  const auto ion = qcomp::testing::ion_device(5);
  TrainConfig cfg;
  cfg.iterations = 0;
  const auto p_sc = train_policy(sc, fidelity_fom(), {example_circuit()}, cfg);
  const auto p_ion = train_policy(ion, fidelity_fom(), {example_circuit()}, cfg);
  const std::array<std::pair<const DeviceModel*, const PolicyModel*>, 2>
      setups{{{&sc, &p_sc}, {&ion, &p_ion}}};
  std::size_t fallbacks = 0;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    for (const auto& [d, p] : setups) {
      const auto c = random_circuit(2 + seed % 4, 4 + seed % 10,
                                    3300 + seed, true);
      const auto result = compile_with_policy(c, *p, *d);
      const auto status = compute_status(result.circuit, *d, result.mapping);
      CHECK(status.executable());
      ++total;
      fallbacks += result.used_fallback ? 1 : 0;
    }
  }
  CHECK(total == 500);
  CHECK(static_cast<double>(fallbacks) < 0.05 * static_cast<double>(total));
}

TEST_CASE("brute force: trivial cases") {
  const auto d = line_device(3);
  const auto fom = fidelity_fom();

  SUBCASE("already-executable circuit, one slot") {
    Circuit c;
    c.num_qubits = 3;
    c.ops.push_back(make_op(Gate::X, 0u));
    MappingState ms;
    auto laid = layout_trivial(c, d, ms);
    // Wrap into an original circuit that is executable from the start.
    const auto result = brute_force_best(laid.circuit, d, fom, 1);
    // Mapping is absent on the fresh episode, so one mapping action is
    // needed; with max_len 1 the best sequence maps and times out scored.
    CHECK(result.best_score > 0.0);
  }
  SUBCASE("max_len 0 on a non-executable circuit scores 0") {
    const auto result = brute_force_best(example_circuit(), d, fom, 0);
    CHECK(result.best_score == 0.0);
    CHECK(result.best_sequence.empty());
  }
  SUBCASE("guards reject big instances") {
    Circuit big;
    big.num_qubits = 7;
    CHECK_THROWS_AS(brute_force_best(big, d, fom, 3), PolicyError);
    CHECK_THROWS_AS(brute_force_best(example_circuit(), d, fom, 6),
                    PolicyError);
  }
}

TEST_CASE("brute force dominates greedy policy compiles") {
  const auto d = line_device(4);
  std::vector<Circuit> corpus;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    corpus.push_back(random_circuit(3, 5 + seed % 6, 600 + seed, true));
  }
  TrainConfig cfg;
  cfg.iterations = 25;
  cfg.batch_episodes = 12;
  const auto p = train_policy(d, fidelity_fom(), corpus, cfg);
  for (const auto& c : corpus) {
    const auto greedy = compile_with_policy(c, p, d);
    const auto oracle = brute_force_best(c, d, fidelity_fom(), 5);
    CHECK(oracle.best_score >= greedy.score - 1e-12);
  }
}

TEST_CASE("brute force beats or matches the L2 baseline on the example") {
  const auto d = line_device(3);
  const auto fom = fidelity_fom();
  const auto oracle = brute_force_best(example_circuit(), d, fom, 5);
  const auto l2 = baseline_pipeline(example_circuit(), d, BaselineLevel::L2);
  const double l2_score = fom.score(l2.circuit, d, l2.mapping);
  CHECK(oracle.best_score >= l2_score - 1e-12);
  CHECK(!oracle.best_sequence.empty());
  // Either an explicit terminate or a full-length sequence scored at the cap.
  CHECK((oracle.best_sequence.back() == "terminate" ||
         oracle.best_sequence.size() == 5));
}
