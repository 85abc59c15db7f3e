// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qcomp/device.hpp"

#include <filesystem>
#include <fstream>

using namespace qcomp;

TEST_CASE("default fleet matches the advertised shape") {
  const auto fleet = default_fleet();
  REQUIRE(fleet.size() == 7);
  CHECK(fleet[0].num_qubits == 8);
  CHECK(fleet[1].num_qubits == 27);
  CHECK(fleet[2].num_qubits == 80);
  CHECK(fleet[3].num_qubits == 127);
  for (int i = 0; i < 4; ++i) {
    CHECK(fleet[i].technology == Technology::Superconducting);
    CHECK(fleet[i].is_native(Gate::Rz));
    CHECK(fleet[i].is_native(Gate::Sx));
    CHECK(fleet[i].is_native(Gate::X));
    CHECK(fleet[i].is_native(Gate::Cx));
  }
  CHECK(fleet[4].num_qubits == 11);
  CHECK(fleet[5].num_qubits == 25);
  CHECK(fleet[6].num_qubits == 32);
  for (int i = 4; i < 7; ++i) {
    CHECK(fleet[i].technology == Technology::IonTrap);
    const std::size_t n = fleet[i].num_qubits;
    CHECK(fleet[i].coupling.size() == n * (n - 1) / 2);
    CHECK(fleet[i].is_native(Gate::Rxx));
  }
}

TEST_CASE("default fleet is deterministic") {
  const auto a = default_fleet();
  const auto b = default_fleet();
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].calibration.single_qubit_fidelity ==
          b[i].calibration.single_qubit_fidelity);
    CHECK(a[i].calibration.two_qubit_fidelity ==
          b[i].calibration.two_qubit_fidelity);
    CHECK(a[i].content_hash() == b[i].content_hash());
  }
}

TEST_CASE("fleet calibration jitters around the exemplar values") {
  for (const auto& d : default_fleet()) {
    for (const auto f : d.calibration.single_qubit_fidelity) {
      CHECK(f <= 0.997);
      CHECK(f >= 0.992);
    }
    for (const auto& [pair, f] : d.calibration.two_qubit_fidelity) {
      CHECK(f <= 0.982);
      CHECK(f >= 0.977);
    }
  }
}

TEST_CASE("superconducting couplings are sparse and connected") {
  const auto fleet = default_fleet();
  for (int i = 0; i < 4; ++i) {
    const auto& d = fleet[i];
    CHECK(d.coupling.size() < std::size_t{2} * d.num_qubits);
    const auto& dist = d.distances();
    for (std::uint32_t q = 0; q < d.num_qubits; ++q) {
      CHECK(dist[0][q] != UINT32_MAX);
    }
  }
}

TEST_CASE("device file round-trip and validation") {
  const auto dir = std::filesystem::temp_directory_path() / "qcomp_dev_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "line3.json").string();

  const auto d = qcomp::testing::line_device(3);
  save_device(d, path);
  const auto back = load_device(path);
  CHECK(back.id == d.id);
  CHECK(back.coupling == std::set<QubitPair>{{0, 1}, {1, 2}});
  CHECK(back.calibration.two_qubit_fidelity == d.calibration.two_qubit_fidelity);

  SUBCASE("dangling coupling index is itemized") {
    const auto text = R"({
      "id": "bad", "technology": "superconducting", "num_qubits": 3,
      "coupling": [[0,1],[0,5]],
      "native_gates": ["rz","sx","x","cx"],
      "calibration": {"single_qubit": 0.99, "two_qubit": 0.98, "readout": 0.97}
    })";
    CHECK_THROWS_WITH_AS(static_cast<void>(device_from_json_text(text)),
                         doctest::Contains("missing qubit"), DeviceError);
  }
  SUBCASE("ion trap files densify to complete coupling") {
    const auto text = R"({
      "id": "tiny-ion", "technology": "ion-trap", "num_qubits": 4,
      "coupling": [[0,1]],
      "native_gates": ["rx","rz","rxx"],
      "calibration": {"single_qubit": 0.99, "two_qubit": 0.98, "readout": 0.97}
    })";
    const auto ion = device_from_json_text(text);
    CHECK(ion.coupling.size() == 6);
    CHECK(ion.calibration.two_qubit_fidelity.at({1, 3}) == 0.98);
  }
  SUBCASE("not json") {
    CHECK_THROWS_AS(static_cast<void>(device_from_json_text("not json")),
                    DeviceError);
  }
}

TEST_CASE("gate_fidelity reads the calibration tables") {
  const auto d = qcomp::testing::line_device(3);
  CHECK(gate_fidelity(d, make_op(Gate::Rz, 0.5, 0u)) == 0.997);
  CHECK(gate_fidelity(d, make_op(Gate::Cx, 0u, 1u)) == 0.982);
  CHECK(gate_fidelity(d, make_op(Gate::Cx, 1u, 0u)) == 0.982);
  CHECK_THROWS_AS(gate_fidelity(d, make_op(Gate::Cx, 0u, 2u)), DeviceError);
  CHECK_THROWS_AS(gate_fidelity(d, make_op(Gate::H, 0u)), DeviceError);

  const auto ion = qcomp::testing::ion_device(4);
  CHECK(gate_fidelity(ion, make_op(Gate::Rxx, 0.3, 0u, 3u)) == 0.982);
}

TEST_CASE("ion-trap devices must have complete coupling") {
  auto d = qcomp::testing::ion_device(3);
  d.coupling.erase({0, 2});
  CHECK_THROWS_AS(d.validate(), DeviceError);
}
