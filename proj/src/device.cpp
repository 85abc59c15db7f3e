// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/device.hpp"

#include "qcomp/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace qcomp {

using nlohmann::json;

std::string technology_name(Technology t) {
  return t == Technology::Superconducting ? "superconducting" : "ion-trap";
}

Technology technology_from_name(const std::string& name) {
  if (name == "superconducting") {
    return Technology::Superconducting;
  }
  if (name == "ion-trap") {
    return Technology::IonTrap;
  }
  throw DeviceError("unknown technology '" + name + "'");
}

const std::vector<std::vector<std::uint32_t>>& DeviceModel::adjacency() const {
  if (adjacency_.empty() && num_qubits > 0) {
    adjacency_.resize(num_qubits);
    for (const auto& [a, b] : coupling) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& row : adjacency_) {
      std::sort(row.begin(), row.end());
    }
  }
  return adjacency_;
}

const std::vector<std::vector<std::uint32_t>>& DeviceModel::distances() const {
  if (distances_.empty() && num_qubits > 0) {
    const auto& adj = adjacency();
    distances_.assign(num_qubits,
                      std::vector<std::uint32_t>(num_qubits, UINT32_MAX));
    for (std::uint32_t start = 0; start < num_qubits; ++start) {
      auto& dist = distances_[start];
      dist[start] = 0;
      std::deque<std::uint32_t> queue{start};
      while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (const auto v : adj[u]) {
          if (dist[v] == UINT32_MAX) {
            dist[v] = dist[u] + 1;
            queue.push_back(v);
          }
        }
      }
    }
  }
  return distances_;
}

std::uint32_t DeviceModel::degree(std::uint32_t q) const {
  return static_cast<std::uint32_t>(adjacency()[q].size());
}

void DeviceModel::validate() const {
  std::vector<std::string> problems;
  if (num_qubits == 0) {
    problems.emplace_back("num_qubits must be positive");
  }
  for (const auto& [a, b] : coupling) {
    if (a >= num_qubits || b >= num_qubits) {
      problems.push_back("coupling pair (" + std::to_string(a) + "," +
                         std::to_string(b) + ") references a missing qubit");
    }
    if (a == b) {
      problems.push_back("coupling pair on a single qubit " + std::to_string(a));
    }
  }
  if (technology == Technology::IonTrap) {
    const std::size_t complete =
        static_cast<std::size_t>(num_qubits) * (num_qubits - 1) / 2;
    if (coupling.size() != complete) {
      problems.emplace_back("ion-trap device must have complete coupling");
    }
  }
  bool has_two_qubit = false;
  for (const auto g : native_gates) {
    has_two_qubit |= is_two_qubit(g);
  }
  if (!has_two_qubit) {
    problems.emplace_back("native gate set lacks a two-qubit gate");
  }
  if (calibration.single_qubit_fidelity.size() != num_qubits) {
    problems.emplace_back("missing single-qubit calibration entries");
  }
  if (calibration.readout_fidelity.size() != num_qubits) {
    problems.emplace_back("missing readout calibration entries");
  }
  for (const auto& [pair, f] : calibration.two_qubit_fidelity) {
    if (f <= 0.0 || f > 1.0) {
      problems.push_back("two-qubit fidelity out of (0,1] for pair (" +
                         std::to_string(pair.first) + "," +
                         std::to_string(pair.second) + ")");
    }
  }
  for (const auto f : calibration.single_qubit_fidelity) {
    if (f <= 0.0 || f > 1.0) {
      problems.emplace_back("single-qubit fidelity out of (0,1]");
      break;
    }
  }
  for (const auto f : calibration.readout_fidelity) {
    if (f <= 0.0 || f > 1.0) {
      problems.emplace_back("readout fidelity out of (0,1]");
      break;
    }
  }
  for (const auto& pair : coupling) {
    if (pair.first < num_qubits && pair.second < num_qubits &&
        calibration.two_qubit_fidelity.count(pair) == 0) {
      problems.push_back("missing two-qubit calibration for pair (" +
                         std::to_string(pair.first) + "," +
                         std::to_string(pair.second) + ")");
    }
  }
  if (!problems.empty()) {
    std::string message = "invalid device '" + id + "':";
    for (const auto& p : problems) {
      message += "\n  - " + p;
    }
    throw DeviceError(message);
  }
  // Pre-warm the lazy caches so validated devices are safe to share
  // read-only across threads.
  adjacency();
  distances();
}

std::uint64_t DeviceModel::content_hash() const {
  return fnv1a64(device_to_json_text(*this));
}

namespace {

json calibration_to_json(const DeviceModel& d) {
  json cal;
  cal["single_qubit"] = d.calibration.single_qubit_fidelity;
  cal["readout"] = d.calibration.readout_fidelity;
  json pairs = json::array();
  for (const auto& [pair, f] : d.calibration.two_qubit_fidelity) {
    pairs.push_back({pair.first, pair.second, f});
  }
  cal["two_qubit"] = pairs;
  return cal;
}

void calibration_from_json(const json& cal, DeviceModel& d) {
  const auto uniform_or_list = [&](const json& entry) {
    std::vector<double> values;
    if (entry.is_number()) {
      values.assign(d.num_qubits, entry.get<double>());
    } else {
      values = entry.get<std::vector<double>>();
    }
    return values;
  };
  d.calibration.single_qubit_fidelity = uniform_or_list(cal.at("single_qubit"));
  d.calibration.readout_fidelity = uniform_or_list(cal.at("readout"));
  const auto& two = cal.at("two_qubit");
  if (two.is_number()) {
    const double f = two.get<double>();
    for (const auto& pair : d.coupling) {
      d.calibration.two_qubit_fidelity[pair] = f;
    }
  } else {
    for (const auto& row : two) {
      const auto a = row.at(0).get<std::uint32_t>();
      const auto b = row.at(1).get<std::uint32_t>();
      d.calibration.two_qubit_fidelity[normalized_pair(a, b)] =
          row.at(2).get<double>();
    }
  }
}

} // namespace

std::string device_to_json_text(const DeviceModel& d) {
  json j;
  j["id"] = d.id;
  j["technology"] = technology_name(d.technology);
  j["num_qubits"] = d.num_qubits;
  json pairs = json::array();
  for (const auto& [a, b] : d.coupling) {
    pairs.push_back({a, b});
  }
  j["coupling"] = pairs;
  std::vector<std::string> gates;
  for (const auto g : d.native_gates) {
    gates.emplace_back(gate_info(g).name);
  }
  j["native_gates"] = gates;
  j["calibration"] = calibration_to_json(d);
  return j.dump(2) + "\n";
}

DeviceModel device_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DeviceError(std::string("device file is not valid JSON: ") + e.what());
  }
  DeviceModel d;
  try {
    d.id = j.at("id").get<std::string>();
    d.technology = technology_from_name(j.at("technology").get<std::string>());
    d.num_qubits = j.at("num_qubits").get<std::uint32_t>();
    const auto& coupling = j.at("coupling");
    if (coupling.is_string() && coupling.get<std::string>() == "complete") {
      for (std::uint32_t a = 0; a < d.num_qubits; ++a) {
        for (std::uint32_t b = a + 1; b < d.num_qubits; ++b) {
          d.coupling.insert({a, b});
        }
      }
    } else {
      for (const auto& row : coupling) {
        d.coupling.insert(normalized_pair(row.at(0).get<std::uint32_t>(),
                                          row.at(1).get<std::uint32_t>()));
      }
    }
    for (const auto& name : j.at("native_gates")) {
      d.native_gates.insert(gate_from_name(name.get<std::string>()));
    }
    calibration_from_json(j.at("calibration"), d);
  } catch (const json::exception& e) {
    throw DeviceError(std::string("device file schema violation: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DeviceError(std::string("device file schema violation: ") + e.what());
  }
  // Ion traps declared with a pair list are densified to complete coupling;
  // missing pairs get the file's uniform two-qubit fidelity.
  if (d.technology == Technology::IonTrap) {
    double uniform = 0.0;
    if (!d.calibration.two_qubit_fidelity.empty()) {
      uniform = d.calibration.two_qubit_fidelity.begin()->second;
    }
    for (std::uint32_t a = 0; a < d.num_qubits; ++a) {
      for (std::uint32_t b = a + 1; b < d.num_qubits; ++b) {
        const QubitPair pair{a, b};
        d.coupling.insert(pair);
        d.calibration.two_qubit_fidelity.emplace(pair, uniform);
      }
    }
  }
  d.validate();
  return d;
}

DeviceModel load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DeviceError("cannot open device file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return device_from_json_text(buffer.str());
}

void save_device(const DeviceModel& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DeviceError("cannot write device file '" + path + "'");
  }
  out << device_to_json_text(d);
}

namespace {

// Chain 0-1-...-(n-1) plus a bridge every fourth qubit to the next row,
// giving a sparse grid with degree <= 3 whose index prefixes stay connected.
std::set<QubitPair> grid_coupling(std::uint32_t n) {
  std::set<QubitPair> coupling;
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    coupling.insert({i, i + 1});
  }
  std::uint32_t row = 4;
  while (row * row < n) {
    row += 4;
  }
  for (std::uint32_t i = 0; i + row < n; i += 4) {
    coupling.insert({i, i + row});
  }
  return coupling;
}

DeviceModel make_device(const std::string& id, Technology tech,
                        std::uint32_t n, const std::set<Gate>& native,
                        std::uint64_t seed) {
  DeviceModel d;
  d.id = id;
  d.technology = tech;
  d.num_qubits = n;
  d.native_gates = native;
  if (tech == Technology::IonTrap) {
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        d.coupling.insert({a, b});
      }
    }
  } else {
    d.coupling = grid_coupling(n);
  }
  // Exemplar calibration values with deterministic per-qubit jitter in
  // [exemplar - 0.005, exemplar]; non-uniform tables make layout matter.
  Rng rng(combine_seed(fnv1a64(id), seed));
  const double k1q = 0.997;
  const double k2q = 0.982;
  const double kro = 0.975;
  d.calibration.single_qubit_fidelity.resize(n);
  d.calibration.readout_fidelity.resize(n);
  for (std::uint32_t q = 0; q < n; ++q) {
    d.calibration.single_qubit_fidelity[q] = k1q - 0.005 * rng.uniform();
    d.calibration.readout_fidelity[q] = kro - 0.005 * rng.uniform();
  }
  for (const auto& pair : d.coupling) {
    d.calibration.two_qubit_fidelity[pair] = k2q - 0.005 * rng.uniform();
  }
  return d;
}

} // namespace

std::vector<DeviceModel> default_fleet() {
  constexpr std::uint64_t kFleetSeed = 0x71c0de;
  const std::set<Gate> sc{Gate::Rz, Gate::Sx, Gate::X, Gate::Cx};
  const std::set<Gate> ion{Gate::Rx, Gate::Rz, Gate::Rxx};
  std::vector<DeviceModel> fleet;
  fleet.push_back(make_device("sc-8", Technology::Superconducting, 8, sc, kFleetSeed));
  fleet.push_back(make_device("sc-27", Technology::Superconducting, 27, sc, kFleetSeed));
  fleet.push_back(make_device("sc-80", Technology::Superconducting, 80, sc, kFleetSeed));
  fleet.push_back(make_device("sc-127", Technology::Superconducting, 127, sc, kFleetSeed));
  fleet.push_back(make_device("ion-11", Technology::IonTrap, 11, ion, kFleetSeed));
  fleet.push_back(make_device("ion-25", Technology::IonTrap, 25, ion, kFleetSeed));
  fleet.push_back(make_device("ion-32", Technology::IonTrap, 32, ion, kFleetSeed));
  for (const auto& d : fleet) {
    d.validate();
  }
  return fleet;
}

double gate_fidelity(const DeviceModel& d, const GateOp& op) {
  if (!d.is_native(op.gate)) {
    throw DeviceError("gate '" + std::string(gate_info(op.gate).name) +
                      "' is not native on device '" + d.id + "'");
  }
  if (is_two_qubit(op.gate)) {
    const auto pair = normalized_pair(op.q0, op.q1);
    const auto it = d.calibration.two_qubit_fidelity.find(pair);
    if (d.coupling.count(pair) == 0 || it == d.calibration.two_qubit_fidelity.end()) {
      throw DeviceError("qubits (" + std::to_string(op.q0) + "," +
                        std::to_string(op.q1) + ") are not coupled on device '" +
                        d.id + "'");
    }
    return it->second;
  }
  return d.calibration.single_qubit_fidelity.at(op.q0);
}

} // namespace qcomp
