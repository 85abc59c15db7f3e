// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/policy.hpp"

#include "qcomp/features.hpp"
#include "qcomp/passes.hpp"
#include "qcomp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qcomp {

using nlohmann::json;

namespace {

// Log-scale caps for the two unbounded observation entries.
constexpr double kQubitLogCap = 7.011227255423254;  // log2(1 + 128)
constexpr double kDepthLogCap = 12.000352177886175; // log2(1 + 4096)

double log_scaled(double value, double cap) {
  return std::clamp(std::log2(1.0 + value) / cap, 0.0, 1.0);
}

} // namespace

std::vector<double> make_observation(const Circuit& c,
                                     const CompilationStatus& status,
                                     bool layout_present) {
  const auto f = extract_features(c);
  std::vector<double> obs;
  obs.reserve(observation_dim());
  obs.push_back(log_scaled(static_cast<double>(f.num_qubits), kQubitLogCap));
  obs.push_back(log_scaled(static_cast<double>(f.depth), kDepthLogCap));
  obs.push_back(f.program_communication);
  obs.push_back(f.critical_depth_ratio);
  obs.push_back(f.entanglement_ratio);
  obs.push_back(f.parallelism);
  obs.push_back(f.liveness);
  // MDP state one-hot: non-native / native-unmapped / executable.
  const bool executable = status.executable();
  obs.push_back(!status.only_native ? 1.0 : 0.0);
  obs.push_back(status.only_native && !executable ? 1.0 : 0.0);
  obs.push_back(executable ? 1.0 : 0.0);
  obs.push_back(layout_present ? 1.0 : 0.0);
  return obs;
}

std::size_t observation_dim() { return 11; }

double PolicyModel::value(const std::vector<double>& obs) const {
  double v = value_bias;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    v += value_weights[i] * obs[i];
  }
  return v;
}

std::vector<double> PolicyModel::logits(const std::vector<double>& obs) const {
  std::vector<double> z(weights.size());
  for (std::size_t a = 0; a < weights.size(); ++a) {
    double acc = bias[a];
    for (std::size_t i = 0; i < obs.size(); ++i) {
      acc += weights[a][i] * obs[i];
    }
    z[a] = acc;
  }
  return z;
}

PolicyModel init_policy(const std::string& device_id, const std::string& fom_id,
                        std::uint64_t seed) {
  PolicyModel p;
  const auto actions = pass_catalog().size();
  p.weights.assign(actions, std::vector<double>(observation_dim(), 0.0));
  p.bias.assign(actions, 0.0);
  p.value_weights.assign(observation_dim(), 0.0);
  p.value_bias = 0.0;
  p.device_id = device_id;
  p.fom_id = fom_id;
  p.catalog = catalog_version();
  p.seed = seed;
  return p;
}

std::vector<double> masked_probabilities(const std::vector<double>& logits,
                                         const std::vector<bool>& mask) {
  std::vector<double> probs(logits.size(), 0.0);
  double max_logit = -1e300;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    if (mask[a]) {
      max_logit = std::max(max_logit, logits[a]);
    }
  }
  double total = 0.0;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    if (mask[a]) {
      probs[a] = std::exp(logits[a] - max_logit);
      total += probs[a];
    }
  }
  for (auto& p : probs) {
    p /= total;
  }
  return probs;
}

std::uint64_t TrainConfig::content_hash() const {
  std::ostringstream text;
  text << seed << ";" << iterations << ";" << batch_episodes << ";" << epochs
       << ";" << learning_rate << ";" << clip << ";" << value_coef << ";"
       << entropy_coef << ";" << eval_fraction << ";" << max_eval_circuits
       << ";" << max_steps;
  return fnv1a64(text.str());
}

double pg_loss(const PolicyModel& p, const std::vector<PgStep>& batch,
               const TrainConfig& cfg, PgGradients* gradients) {
  const auto actions = p.weights.size();
  const auto dim = p.value_weights.size();
  if (gradients != nullptr) {
    gradients->weights.assign(actions, std::vector<double>(dim, 0.0));
    gradients->bias.assign(actions, 0.0);
    gradients->value_weights.assign(dim, 0.0);
    gradients->value_bias = 0.0;
  }
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const auto& step : batch) {
    const auto logits = p.logits(step.observation);
    const auto probs = masked_probabilities(logits, step.mask);
    const double logp = std::log(probs[step.action]);
    const double ratio = std::exp(logp - step.logp_old);

    // Clipped surrogate.
    const double surr1 = ratio * step.advantage;
    const double clipped =
        std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
    const double surr2 = clipped * step.advantage;
    loss += -std::min(surr1, surr2) * inv_n;
    // d(-min)/dlogp: the ratio branch contributes -A*r, the clip branch 0.
    double dlogp = 0.0;
    if (surr1 <= surr2) {
      dlogp = -step.advantage * ratio;
    }

    // Entropy bonus over legal actions.
    double entropy = 0.0;
    for (std::size_t a = 0; a < actions; ++a) {
      if (step.mask[a] && probs[a] > 0.0) {
        entropy -= probs[a] * std::log(probs[a]);
      }
    }
    loss += -cfg.entropy_coef * entropy * inv_n;

    // Value loss.
    const double v = p.value(step.observation);
    const double verr = v - step.return_value;
    loss += cfg.value_coef * verr * verr * inv_n;

    if (gradients == nullptr) {
      continue;
    }
    for (std::size_t a = 0; a < actions; ++a) {
      if (!step.mask[a]) {
        continue;
      }
      const double indicator = a == step.action ? 1.0 : 0.0;
      // d(logp)/dz_a for masked softmax.
      double dz = dlogp * (indicator - probs[a]);
      // d(-c_e * H)/dz_a.
      double hterm = 0.0;
      for (std::size_t b = 0; b < actions; ++b) {
        if (step.mask[b] && probs[b] > 0.0) {
          hterm += probs[b] * std::log(probs[b]);
        }
      }
      if (probs[a] > 0.0) {
        dz += cfg.entropy_coef * probs[a] * (std::log(probs[a]) + (-hterm));
      }
      dz *= inv_n;
      gradients->bias[a] += dz;
      for (std::size_t i = 0; i < dim; ++i) {
        gradients->weights[a][i] += dz * step.observation[i];
      }
    }
    const double dv = cfg.value_coef * 2.0 * verr * inv_n;
    gradients->value_bias += dv;
    for (std::size_t i = 0; i < dim; ++i) {
      gradients->value_weights[i] += dv * step.observation[i];
    }
  }
  return loss;
}

namespace {

struct Adam {
  explicit Adam(std::size_t actions, std::size_t dim)
      : mw(actions, std::vector<double>(dim, 0.0)),
        vw(actions, std::vector<double>(dim, 0.0)), mb(actions, 0.0),
        vb(actions, 0.0), mvw(dim, 0.0), vvw(dim, 0.0) {}

  void update(PolicyModel& p, const PgGradients& g, double lr) {
    ++t;
    const double corr1 = 1.0 - std::pow(beta1, t);
    const double corr2 = 1.0 - std::pow(beta2, t);
    const auto apply = [&](double& param, double& m, double& v, double grad) {
      m = beta1 * m + (1.0 - beta1) * grad;
      v = beta2 * v + (1.0 - beta2) * grad * grad;
      param -= lr * (m / corr1) / (std::sqrt(v / corr2) + eps);
    };
    for (std::size_t a = 0; a < p.weights.size(); ++a) {
      for (std::size_t i = 0; i < p.weights[a].size(); ++i) {
        apply(p.weights[a][i], mw[a][i], vw[a][i], g.weights[a][i]);
      }
      apply(p.bias[a], mb[a], vb[a], g.bias[a]);
    }
    for (std::size_t i = 0; i < p.value_weights.size(); ++i) {
      apply(p.value_weights[i], mvw[i], vvw[i], g.value_weights[i]);
    }
    apply(p.value_bias, mvb, vvb, g.value_bias);
  }

  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int t = 0;
  std::vector<std::vector<double>> mw, vw;
  std::vector<double> mb, vb, mvw, vvw;
  double mvb = 0.0, vvb = 0.0;
};

struct RolloutResult {
  std::vector<PgStep> steps;
  double reward = 0.0;
};

RolloutResult rollout(const PolicyModel& p, const Circuit& c,
                      const DeviceModel& d, const FigureOfMerit& fom,
                      std::uint64_t episode_seed, int max_steps, Rng& rng) {
  RolloutResult result;
  Episode e = make_episode(c, d, fom, episode_seed, max_steps);
  while (!e.done) {
    const auto mask = action_mask(e);
    const auto obs = make_observation(e.circuit, e.status, e.mapping.has_layout());
    const auto probs = masked_probabilities(p.logits(obs), mask);
    double draw = rng.uniform();
    std::size_t action = 0;
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
    PgStep step;
    step.observation = obs;
    step.mask = mask;
    step.action = action;
    step.logp_old = std::log(probs[action]);
    result.steps.push_back(std::move(step));
    result.reward = qcomp::step(e, action);
  }
  return result;
}

double greedy_eval(const PolicyModel& p, const std::vector<Circuit>& circuits,
                   const DeviceModel& d) {
  if (circuits.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (const auto& c : circuits) {
    total += compile_with_policy(c, p, d, CompileMode::Greedy).score;
  }
  return total / static_cast<double>(circuits.size());
}

} // namespace

PolicyModel train_policy(const DeviceModel& device, const FigureOfMerit& fom,
                         const std::vector<Circuit>& corpus,
                         const TrainConfig& cfg) {
  if (corpus.empty()) {
    throw PolicyError("training corpus is empty");
  }
  for (const auto& c : corpus) {
    if (c.num_qubits > device.num_qubits) {
      throw PolicyError("training circuit exceeds device size");
    }
  }

  // Held-out slice for model selection.
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  Rng split_rng(combine_seed(cfg.seed, 0xe7a1));
  split_rng.shuffle(order);
  const auto eval_count = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, cfg.max_eval_circuits)),
      std::max<std::size_t>(
          1, static_cast<std::size_t>(std::floor(
                 cfg.eval_fraction * static_cast<double>(corpus.size())))));
  std::vector<Circuit> eval_set;
  std::vector<Circuit> train_set;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < eval_count ? eval_set : train_set).push_back(corpus[order[i]]);
  }
  if (train_set.empty()) {
    train_set = eval_set;
  }

  PolicyModel p = init_policy(device.id, fom.id, cfg.seed);
  p.fom_id = fom.id;
  PolicyModel best = p;
  double best_score = greedy_eval(p, eval_set, device);

  Adam adam(p.weights.size(), p.value_weights.size());
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    Rng rng(combine_seed(cfg.seed, 0x1000 + static_cast<std::uint64_t>(iter)));
    std::vector<PgStep> batch;
    for (int ep = 0; ep < cfg.batch_episodes; ++ep) {
      const auto& circuit = train_set[rng.index(train_set.size())];
      auto rolled = rollout(p, circuit, device, fom,
                            combine_seed(cfg.seed, static_cast<std::uint64_t>(
                                                       iter * 1000 + ep)),
                            cfg.max_steps, rng);
      for (auto& step : rolled.steps) {
        step.return_value = rolled.reward;
        batch.push_back(std::move(step));
      }
    }
    if (batch.empty()) {
      continue;
    }
    // Advantage: sparse return minus the value baseline, normalized.
    double mean = 0.0;
    for (auto& step : batch) {
      step.advantage = step.return_value - p.value(step.observation);
      mean += step.advantage;
    }
    mean /= static_cast<double>(batch.size());
    double var = 0.0;
    for (const auto& step : batch) {
      var += (step.advantage - mean) * (step.advantage - mean);
    }
    const double stddev =
        std::sqrt(var / static_cast<double>(batch.size())) + 1e-8;
    for (auto& step : batch) {
      step.advantage = (step.advantage - mean) / stddev;
    }

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      PgGradients grads;
      const double loss = pg_loss(p, batch, cfg, &grads);
      if (!std::isfinite(loss)) {
        throw PolicyError("non-finite training loss at iteration " +
                          std::to_string(iter));
      }
      adam.update(p, grads, cfg.learning_rate);
    }

    const double score = greedy_eval(p, eval_set, device);
    if (score >= best_score) { // later snapshots win ties

      best_score = score;
      best = p;
      best.trained_iterations = iter + 1;
    }
  }
  best.best_eval = best_score;
  best.seed = cfg.seed;
  return best;
}

CompiledResult compile_with_policy(const Circuit& c, const PolicyModel& p,
                                   const DeviceModel& d, CompileMode mode,
                                   std::uint64_t sample_seed) {
  if (p.catalog != catalog_version()) {
    throw PolicyError("policy was trained against a different pass catalog");
  }
  if (!p.device_id.empty() && p.device_id != d.id) {
    throw PolicyError("policy is for device '" + p.device_id +
                      "', not '" + d.id + "'");
  }
  if (c.num_qubits > d.num_qubits) {
    throw PolicyError("circuit does not fit device '" + d.id + "'");
  }
  const auto fom = make_fom(p.fom_id.empty() ? "expected_fidelity" : p.fom_id);
  Episode e = make_episode(c, d, fom, sample_seed);
  Rng rng(combine_seed(sample_seed, 0x5a3));
  CompiledResult result;
  double reward = 0.0;

  const auto state_key = [](const Circuit& circuit, const MappingState& ms) {
    std::uint64_t h = circuit_hash(circuit);
    if (ms.has_layout()) {
      for (const auto w : *ms.layout) {
        h = split_mix(h ^ w);
      }
    }
    for (const auto w : ms.routing_permutation) {
      h = split_mix(h ^ (w + 0x51ed));
    }
    return h;
  };
  std::set<std::uint64_t> visited;
  visited.insert(state_key(e.circuit, e.mapping));

  while (!e.done) {
    const auto mask = action_mask(e);
    const auto obs = make_observation(e.circuit, e.status, e.mapping.has_layout());
    const auto probs = masked_probabilities(p.logits(obs), mask);
    std::size_t action = 0;
    if (mode == CompileMode::Greedy) {
      // Argmax with cycle avoidance: skip actions that lead back to a state
      // already seen this episode (terminate always progresses).
      std::vector<std::size_t> order;
      for (std::size_t a = 0; a < probs.size(); ++a) {
        if (mask[a]) {
          order.push_back(a);
        }
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return probs[a] > probs[b];
                       });
      action = order.front();
      for (const auto a : order) {
        const auto& candidate = pass_catalog()[a];
        if (candidate.kind == PassKind::Terminate) {
          action = a;
          break;
        }
        const auto applied = candidate.apply(e.circuit, *e.device, e.mapping);
        if (visited.count(state_key(applied.circuit, applied.mapping)) == 0) {
          action = a;
          break;
        }
      }
    } else {
      double draw = rng.uniform();
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
    }
    result.pass_log.push_back(pass_catalog()[action].id);
    reward = step(e, action);
    visited.insert(state_key(e.circuit, e.mapping));
  }
  if (!e.status.executable()) {
    auto fallback = baseline_pipeline(c, d, BaselineLevel::L1);
    result.circuit = std::move(fallback.circuit);
    result.mapping = std::move(fallback.mapping);
    result.used_fallback = true;
    result.score = fom.score(result.circuit, d, result.mapping);
    result.pass_log.push_back("fallback_baseline_l1");
    return result;
  }
  result.circuit = std::move(e.circuit);
  result.mapping = std::move(e.mapping);
  result.score = reward;
  return result;
}

BruteForceResult brute_force_best(const Circuit& c, const DeviceModel& d,
                                  const FigureOfMerit& fom, int max_len) {
  if (c.num_qubits > 6 || max_len > 5) {
    throw PolicyError("brute force guarded to <= 6 qubits and max_len <= 5");
  }
  BruteForceResult best;
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> visited;

  const auto mapping_hash = [](const MappingState& ms) {
    std::uint64_t h = ms.has_layout() ? 0x9e3779b97f4a7c15ULL : 0;
    if (ms.has_layout()) {
      for (const auto w : *ms.layout) {
        h = split_mix(h ^ w);
      }
    }
    for (const auto w : ms.routing_permutation) {
      h = split_mix(h ^ (w + 0x51ed));
    }
    return h;
  };

  const std::function<void(Episode&, int, std::vector<std::string>&)> dfs =
      [&](Episode& e, int used, std::vector<std::string>& path) {
        if (e.status.executable()) {
          const double score = e.fom.score(e.circuit, *e.device, e.mapping);
          if (score > best.best_score || best.best_sequence.empty()) {
            best.best_score = score;
            best.best_sequence = path;
            if (used < max_len) {
              best.best_sequence.push_back("terminate");
            }
          }
        }
        if (used >= max_len) {
          return;
        }
        const auto key = std::make_pair(circuit_hash(e.circuit),
                                        mapping_hash(e.mapping));
        const auto it = visited.find(key);
        const int remaining = max_len - used;
        if (it != visited.end() && it->second >= remaining) {
          return;
        }
        visited[key] = remaining;
        const auto mask = action_mask(e);
        for (std::size_t a = 0; a < mask.size(); ++a) {
          if (!mask[a] || pass_catalog()[a].kind == PassKind::Terminate) {
            continue;
          }
          Episode next = e;
          qcomp::step(next, a);
          next.done = false; // the cap belongs to the search, not the episode
          path.push_back(pass_catalog()[a].id);
          dfs(next, used + 1, path);
          path.pop_back();
        }
      };

  Episode root = make_episode(c, d, fom, 0, std::max(1, max_len));
  std::vector<std::string> path;
  dfs(root, 0, path);
  return best;
}

// ---- serialization ----

std::string policy_to_json_text(const PolicyModel& p) {
  json j;
  j["format"] = "qcomp-policy-v1";
  j["catalog"] = p.catalog;
  j["device_id"] = p.device_id;
  j["fom_id"] = p.fom_id;
  j["seed"] = p.seed;
  j["trained_iterations"] = p.trained_iterations;
  j["best_eval"] = p.best_eval;
  j["weights"] = p.weights;
  j["bias"] = p.bias;
  j["value_weights"] = p.value_weights;
  j["value_bias"] = p.value_bias;
  return j.dump(2) + "\n";
}

PolicyModel policy_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PolicyError(std::string("corrupt policy file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "qcomp-policy-v1") {
      throw PolicyError("unsupported policy format");
    }
    PolicyModel p;
    p.catalog = j.at("catalog").get<std::string>();
    if (p.catalog != catalog_version()) {
      throw PolicyError("policy catalog version mismatch (file " + p.catalog +
                        ", current " + catalog_version() + ")");
    }
    p.device_id = j.at("device_id").get<std::string>();
    p.fom_id = j.at("fom_id").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.trained_iterations = j.at("trained_iterations").get<int>();
    p.best_eval = j.at("best_eval").get<double>();
    p.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    p.bias = j.at("bias").get<std::vector<double>>();
    p.value_weights = j.at("value_weights").get<std::vector<double>>();
    p.value_bias = j.at("value_bias").get<double>();
    if (p.weights.size() != pass_catalog().size() ||
        p.bias.size() != pass_catalog().size()) {
      throw PolicyError("policy parameter shape mismatch");
    }
    return p;
  } catch (const json::exception& e) {
    throw PolicyError(std::string("corrupt policy file: ") + e.what());
  }
}

void save_policy(const PolicyModel& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw PolicyError("cannot write policy file '" + path + "'");
  }
  out << policy_to_json_text(p);
}

PolicyModel load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw PolicyError("cannot open policy file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return policy_from_json_text(buffer.str());
}

} // namespace qcomp
