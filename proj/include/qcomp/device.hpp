// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_DEVICE_HPP
#define QCOMP_DEVICE_HPP

#include "qcomp/circuit.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qcomp {

enum class Technology { Superconducting, IonTrap };

std::string technology_name(Technology t);
Technology technology_from_name(const std::string& name);

/// Normalized (lo, hi) coupling pair.
using QubitPair = std::pair<std::uint32_t, std::uint32_t>;

inline QubitPair normalized_pair(std::uint32_t a, std::uint32_t b) {
  return a < b ? QubitPair{a, b} : QubitPair{b, a};
}

struct CalibrationTable {
  std::vector<double> single_qubit_fidelity; // per qubit
  std::map<QubitPair, double> two_qubit_fidelity;
  std::vector<double> readout_fidelity; // per qubit
};

class DeviceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DeviceModel {
  std::string id;
  Technology technology = Technology::Superconducting;
  std::uint32_t num_qubits = 0;
  std::set<QubitPair> coupling;
  std::set<Gate> native_gates;
  CalibrationTable calibration;

  bool is_native(Gate g) const { return native_gates.count(g) != 0; }
  bool coupled(std::uint32_t a, std::uint32_t b) const {
    return coupling.count(normalized_pair(a, b)) != 0;
  }

  const std::vector<std::vector<std::uint32_t>>& adjacency() const;
  /// Hop distances in the coupling graph (UINT32_MAX if disconnected).
  const std::vector<std::vector<std::uint32_t>>& distances() const;
  std::uint32_t degree(std::uint32_t q) const;

  /// Itemizes structural problems; throws DeviceError listing all of them.
  void validate() const;

  /// Hash over everything that affects compilation results for this device.
  std::uint64_t content_hash() const;

private:
  mutable std::vector<std::vector<std::uint32_t>> adjacency_;
  mutable std::vector<std::vector<std::uint32_t>> distances_;
};

/// Loads and validates a device description (JSON, see README / save_device).
DeviceModel load_device(const std::string& path);
DeviceModel device_from_json_text(const std::string& text);
std::string device_to_json_text(const DeviceModel& d);
void save_device(const DeviceModel& d, const std::string& path);

/// The seven built-in devices: superconducting with 8/27/80/127 qubits on a
/// sparse chain-plus-bridges topology with native {rz, sx, x, cx}, and
/// all-to-all ion traps with 11/25/32 qubits and native {rx, rz, rxx}.
/// Calibration is seeded deterministically around the 1Q 99.7% / 2Q 98.2% /
/// RO 97.5% exemplar values with per-qubit jitter, so two calls always
/// return identical tables.
std::vector<DeviceModel> default_fleet();

/// Calibration entry for a gate already placed on physical qubits.
/// Throws DeviceError for non-native gates and uncoupled pairs.
double gate_fidelity(const DeviceModel& d, const GateOp& op);

} // namespace qcomp

#endif
