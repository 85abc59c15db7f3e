// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/corpus.hpp"
#include "qcomp/device.hpp"
#include "qcomp/passes.hpp"
#include "qcomp/pipeline.hpp"
#include "qcomp/qasm.hpp"
#include "qcomp/rl_env.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qcomp;

namespace {

// Exit codes: 0 success, 1 usage, 2 data error, 3 internal.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

Circuit read_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open qasm file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_qasm(buffer.str());
}

std::vector<DeviceModel> load_fleet(const std::string& spec) {
  if (spec.empty() || spec == "default") {
    return default_fleet();
  }
  std::vector<DeviceModel> fleet;
  for (const auto& entry : fs::directory_iterator(spec)) {
    if (entry.path().extension() == ".json") {
      fleet.push_back(load_device(entry.path().string()));
    }
  }
  if (fleet.empty()) {
    throw DeviceError("no device files under '" + spec + "'");
  }
  std::sort(fleet.begin(), fleet.end(),
            [](const DeviceModel& a, const DeviceModel& b) {
              return a.id < b.id;
            });
  return fleet;
}

std::vector<std::pair<std::string, Circuit>>
load_eval_corpus(const std::string& dir) {
  std::vector<std::pair<std::string, Circuit>> corpus;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
      corpus.emplace_back(entry.path().stem().string(),
                          read_circuit(entry.path().string()));
    }
  }
  std::sort(corpus.begin(), corpus.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (corpus.empty()) {
    throw CorpusError("no .qasm files under '" + dir + "'");
  }
  return corpus;
}

void write_text(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) {
    fs::create_directories(p.parent_path());
  }
  std::ofstream out(p);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << content;
}

CorpusSpec parse_corpus_options(const std::vector<std::string>& families,
                                std::uint32_t min_qubits,
                                std::uint32_t max_qubits, int instances,
                                std::uint64_t seed, bool training) {
  CorpusSpec spec;
  if (!families.empty()) {
    spec.families.clear();
    for (const auto& name : families) {
      spec.families.push_back(family_from_name(name));
    }
  } else if (training) {
    spec.families = BundleConfig{}.train_spec.families;
  }
  spec.min_qubits = min_qubits;
  spec.max_qubits = max_qubits;
  spec.instances_per_size = instances;
  spec.seed = seed;
  spec.training = training;
  return spec;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-circuit device selection and compilation toolkit"};
  app.require_subcommand(1);

  // ---- corpus ----
  auto* corpus_cmd =
      app.add_subcommand("corpus", "Generate benchmark circuits as OpenQASM");
  std::string corpus_out = "corpus";
  std::vector<std::string> corpus_families;
  std::uint32_t corpus_min = 2;
  std::uint32_t corpus_max = 12;
  int corpus_instances = 1;
  std::uint64_t corpus_seed = 11;
  bool corpus_training = false;
  corpus_cmd->add_option("--out", corpus_out, "Output directory");
  corpus_cmd->add_option("--families", corpus_families,
                         "Subset of families (default: all)");
  corpus_cmd->add_option("--min-qubits", corpus_min, "Smallest circuit size");
  corpus_cmd->add_option("--max-qubits", corpus_max, "Largest circuit size");
  corpus_cmd->add_option("--instances", corpus_instances,
                         "Instances per family and size");
  corpus_cmd->add_option("--seed", corpus_seed, "Corpus seed");
  corpus_cmd->add_flag("--training", corpus_training,
                       "Training corpus (excludes ghz)");

  // ---- train ----
  auto* train_cmd = app.add_subcommand(
      "train", "Train per-device policies and device-selection forests");
  std::string train_fleet = "default";
  std::vector<std::string> train_foms{"expected_fidelity", "critical_depth"};
  std::uint64_t train_seed = 1;
  std::string train_out = "bundle";
  int train_iterations = 150;
  std::uint32_t train_min = 2;
  std::uint32_t train_max = 8;
  int train_instances = 2;
  train_cmd->add_option("--fleet", train_fleet,
                        "'default' or a directory of device files");
  train_cmd->add_option("--fom", train_foms, "Figures of merit to train for");
  train_cmd->add_option("--seed", train_seed, "Training seed");
  train_cmd->add_option("--out", train_out, "Bundle directory");
  train_cmd->add_option("--iterations", train_iterations,
                        "Policy-gradient iterations per device");
  train_cmd->add_option("--min-qubits", train_min, "Training corpus minimum");
  train_cmd->add_option("--max-qubits", train_max, "Training corpus maximum");
  train_cmd->add_option("--instances", train_instances,
                        "Training corpus instances per size");

  // ---- predict ----
  auto* predict_cmd =
      app.add_subcommand("predict", "Predict the most promising device");
  std::string predict_qasm;
  std::string predict_bundle = "bundle";
  std::string predict_fom = "expected_fidelity";
  predict_cmd->add_option("--qasm", predict_qasm, "Input circuit")->required();
  predict_cmd->add_option("--bundle", predict_bundle, "Bundle directory");
  predict_cmd->add_option("--fom", predict_fom, "Figure of merit id");

  // ---- compile ----
  auto* compile_cmd = app.add_subcommand(
      "compile", "Compile a circuit (predicted device by default)");
  std::string compile_qasm;
  std::string compile_bundle = "bundle";
  std::string compile_fom = "expected_fidelity";
  std::string compile_device;
  std::string compile_out;
  compile_cmd->add_option("--qasm", compile_qasm, "Input circuit")->required();
  compile_cmd->add_option("--bundle", compile_bundle, "Bundle directory");
  compile_cmd->add_option("--fom", compile_fom, "Figure of merit id");
  compile_cmd->add_option("--device", compile_device,
                          "Target device id (default: predicted)");
  compile_cmd->add_option("--out", compile_out, "Write compiled OpenQASM here");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand(
      "bench", "Benchmark the pipeline against the fixed baselines");
  std::string bench_corpus;
  std::string bench_bundle = "bundle";
  std::string bench_fom = "expected_fidelity";
  std::string bench_report_dir = "reports";
  bench_cmd->add_option("--corpus", bench_corpus, "Directory of .qasm files")
      ->required();
  bench_cmd->add_option("--bundle", bench_bundle, "Bundle directory");
  bench_cmd->add_option("--fom", bench_fom, "Figure of merit id");
  bench_cmd->add_option("--report-dir", bench_report_dir, "Report directory");

  // ---- report ----
  auto* report_cmd =
      app.add_subcommand("report", "Emit analysis reports as CSV");
  std::string report_kind;
  std::string report_corpus;
  std::string report_bundle = "bundle";
  std::string report_fom = "expected_fidelity";
  std::string report_dir = "reports";
  report_cmd
      ->add_option("kind", report_kind,
                   "device-distribution | isolated-ml | isolated-rl | "
                   "fom-compare")
      ->required();
  report_cmd->add_option("--corpus", report_corpus, "Directory of .qasm files")
      ->required();
  report_cmd->add_option("--bundle", report_bundle, "Bundle directory");
  report_cmd->add_option("--fom", report_fom, "Figure of merit id");
  report_cmd->add_option("--report-dir", report_dir, "Report directory");

  // ---- passes ----
  auto* passes_cmd =
      app.add_subcommand("passes", "List the compilation pass catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (corpus_cmd->parsed()) {
      const auto spec =
          parse_corpus_options(corpus_families, corpus_min, corpus_max,
                               corpus_instances, corpus_seed, corpus_training);
      const auto corpus = generate_corpus(spec);
      for (const auto& [name, circuit] : corpus) {
        const auto family = name.substr(0, name.find("_n"));
        const auto size = std::to_string(circuit.num_qubits);
        const auto path =
            fs::path(corpus_out) / family / size / (name + ".qasm");
        write_text(path.string(), serialize_qasm(circuit));
      }
      std::cout << "wrote " << corpus.size() << " circuits under "
                << corpus_out << "\n";
      return kExitOk;
    }

    if (train_cmd->parsed()) {
      BundleConfig cfg;
      cfg.fom_ids = train_foms;
      cfg.rl.seed = train_seed;
      cfg.rl.iterations = train_iterations;
      cfg.train_spec.seed = train_seed;
      cfg.train_spec.min_qubits = train_min;
      cfg.train_spec.max_qubits = train_max;
      cfg.train_spec.instances_per_size = train_instances;
      const auto fleet = load_fleet(train_fleet);
      train_bundle(fleet, cfg, train_out, &std::cout);
      std::cout << "bundle ready under " << train_out << "\n";
      return kExitOk;
    }

    if (predict_cmd->parsed()) {
      const auto bundle = load_bundle(predict_bundle);
      const auto circuit = read_circuit(predict_qasm);
      const auto ranking =
          qcomp::predict_device(circuit, bundle.forest_for(predict_fom));
      std::cout << "device,vote_share\n";
      for (const auto& [device, share] : ranking) {
        std::cout << device << "," << share << "\n";
      }
      return kExitOk;
    }

    if (compile_cmd->parsed()) {
      const auto bundle = load_bundle(compile_bundle);
      const auto circuit = read_circuit(compile_qasm);
      CompileOutcome outcome;
      if (compile_device.empty()) {
        outcome = predict_and_compile(circuit, bundle, compile_fom);
      } else {
        const auto& device = bundle.device(compile_device);
        const auto result = compile_with_policy(
            circuit, bundle.policy_for(compile_fom, compile_device), device);
        outcome.device_id = compile_device;
        outcome.circuit = result.circuit;
        outcome.mapping = result.mapping;
        outcome.pass_log = result.pass_log;
        outcome.score = result.score;
        outcome.used_fallback = result.used_fallback;
      }
      std::cerr << "device: " << outcome.device_id << "\n";
      std::cerr << "score: " << outcome.score << "\n";
      std::cerr << "passes:";
      for (const auto& id : outcome.pass_log) {
        std::cerr << " " << id;
      }
      std::cerr << "\n";
      const auto qasm = serialize_qasm(outcome.circuit);
      if (compile_out.empty()) {
        std::cout << qasm;
      } else {
        write_text(compile_out, qasm);
      }
      return kExitOk;
    }

    if (bench_cmd->parsed()) {
      const auto bundle = load_bundle(bench_bundle);
      const auto corpus = load_eval_corpus(bench_corpus);
      const auto report = run_benchmarks(corpus, bundle, bench_fom);
      const auto path =
          fs::path(bench_report_dir) / ("bench_" + bench_fom + ".csv");
      write_text(path.string(), report.to_csv());
      std::cout << "benchmarks: " << report.rows.size() << " rows, top-3 rate "
                << report.top_k_rate(3) << ", max improvement "
                << report.max_improvement_ratio() << "\n";
      std::cout << "report written to " << path.string() << "\n";
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const auto bundle = load_bundle(report_bundle);
      const auto corpus = load_eval_corpus(report_corpus);
      std::string csv;
      std::string file;
      if (report_kind == "device-distribution") {
        csv = device_distribution_report(corpus, bundle, report_fom).to_csv();
        file = "device_distribution_" + report_fom + ".csv";
      } else if (report_kind == "isolated-ml") {
        csv = isolated_evaluations(corpus, bundle, report_fom,
                                   IsolationMode::FixedDevice)
                  .to_csv();
        file = "isolated_ml_" + report_fom + ".csv";
      } else if (report_kind == "isolated-rl") {
        csv = isolated_evaluations(corpus, bundle, report_fom,
                                   IsolationMode::FixedCompiler)
                  .to_csv();
        file = "isolated_rl_" + report_fom + ".csv";
      } else if (report_kind == "fom-compare") {
        csv = fom_cross_comparison(corpus, bundle).to_csv();
        file = "fom_compare.csv";
      } else {
        std::cerr << "unknown report kind '" << report_kind << "'\n";
        return kExitUsage;
      }
      const auto path = fs::path(report_dir) / file;
      write_text(path.string(), csv);
      std::cout << "report written to " << path.string() << "\n";
      return kExitOk;
    }

    if (passes_cmd->parsed()) {
      std::cout << "id,kind\n";
      for (const auto& action : pass_catalog()) {
        std::cout << action.id << "," << pass_kind_name(action.kind) << "\n";
      }
      std::cout << "# catalog version: " << catalog_version() << "\n";
      return kExitOk;
    }
  } catch (const QasmError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DeviceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const BundleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
