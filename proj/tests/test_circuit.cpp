// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qcomp/circuit.hpp"
#include "qcomp/metrics.hpp"
#include "qcomp/qasm.hpp"

#include <algorithm>

using namespace qcomp;
using qcomp::testing::random_circuit;

TEST_CASE("gate vocabulary is fixed") {
  CHECK(kNumGates == 16);
  CHECK(gate_from_name("rz") == Gate::Rz);
  CHECK(gate_info(Gate::Rz).num_params == 1);
  CHECK(gate_info(Gate::Cx).num_qubits == 2);
  CHECK(gate_info(Gate::Cx).num_params == 0);
  CHECK_THROWS_AS(gate_from_name("u3"), std::invalid_argument);
}

TEST_CASE("circuit validation") {
  Circuit c;
  c.num_qubits = 2;
  c.ops.push_back(make_op(Gate::Cx, 0u, 1u));
  CHECK_NOTHROW(c.validate());

  SUBCASE("out of range qubit") {
    c.ops.push_back(make_op(Gate::X, 5u));
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }
  SUBCASE("repeated qubit in two-qubit op") {
    c.ops.push_back(GateOp{Gate::Cx, 0.0, 1, 1});
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }
  SUBCASE("non-finite parameter") {
    c.ops.push_back(make_op(Gate::Rz, std::nan(""), 0u));
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }
  SUBCASE("measurement out of range") {
    c.measurements.push_back({7, 0});
    CHECK_THROWS_AS(c.validate(), ValidationError);
  }
}

TEST_CASE("qasm parsing: empty program") {
  const auto c = parse_qasm("OPENQASM 2.0; include \"qelib1.inc\"; qreg q[2];");
  CHECK(c.num_qubits == 2);
  CHECK(c.ops.empty());
  CHECK(c.measurements.empty());
}

TEST_CASE("qasm parsing: worked example structure") {
  const auto c = parse_qasm(R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
h q[1];
rz(-pi/2) q[1];
cx q[0],q[1];
cx q[1],q[2];
)");
  REQUIRE(c.ops.size() == 4);
  CHECK(c.ops[0] == make_op(Gate::H, 1u));
  CHECK(c.ops[1].gate == Gate::Rz);
  CHECK(c.ops[1].param == doctest::Approx(-1.5707963267948966));
  CHECK(c.ops[2] == make_op(Gate::Cx, 0u, 1u));
  CHECK(c.ops[3] == make_op(Gate::Cx, 1u, 2u));
}

TEST_CASE("qasm parsing: errors carry position") {
  SUBCASE("repeated qubit") {
    try {
      parse_qasm("OPENQASM 2.0; qreg q[2];\ncx q[0],q[0];");
      FAIL("expected QasmError");
    } catch (const QasmError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("unsupported gate") {
    CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[1]; ccx q[0];"),
                    QasmError);
  }
  SUBCASE("register index out of range") {
    CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; x q[2];"), QasmError);
  }
  SUBCASE("bad version") {
    CHECK_THROWS_AS(parse_qasm("OPENQASM 3.0; qreg q[1];"), QasmError);
  }
  SUBCASE("division by zero parameter") {
    CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[1]; rz(1/0) q[0];"),
                    QasmError);
  }
}

TEST_CASE("qasm parsing: multiple registers flatten in order") {
  const auto c = parse_qasm(R"(OPENQASM 2.0;
qreg a[2];
qreg b[2];
creg m[4];
x a[1];
x b[0];
measure b[1] -> m[3];
barrier a[0], b[0];
)");
  CHECK(c.num_qubits == 4);
  CHECK(c.ops[0].q0 == 1);
  CHECK(c.ops[1].q0 == 2);
  REQUIRE(c.measurements.size() == 1);
  CHECK(c.measurements[0].qubit == 3);
  CHECK(c.measurements[0].cbit == 3);
}

TEST_CASE("qasm serialization: parameter precision") {
  Circuit c;
  c.num_qubits = 1;
  c.ops.push_back(make_op(Gate::Rz, 0.5, 0u));
  const auto text = serialize_qasm(c);
  CHECK(text.find("rz(0.5) q[0];") != std::string::npos);
  c.ops[0].param = 1.0 / 3.0;
  const auto reparsed = parse_qasm(serialize_qasm(c));
  CHECK(reparsed.ops[0].param == c.ops[0].param); // bit-exact round trip
}

TEST_CASE("qasm round-trip property") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = random_circuit(2 + seed % 5, 3 + seed % 20, seed, true);
    const auto back = parse_qasm(serialize_qasm(c));
    CHECK(back == c);
  }
}

TEST_CASE("metrics: empty circuit") {
  Circuit c;
  c.num_qubits = 3;
  const auto m = compute_metrics(c);
  CHECK(m.depth == 0);
  CHECK(m.two_qubit_count == 0);
  CHECK(m.critical_path_two_qubit_count == 0);
}

TEST_CASE("metrics: linear ghz chain") {
  Circuit c;
  c.num_qubits = 4;
  c.ops.push_back(make_op(Gate::H, 0u));
  c.ops.push_back(make_op(Gate::Cx, 0u, 1u));
  c.ops.push_back(make_op(Gate::Cx, 1u, 2u));
  c.ops.push_back(make_op(Gate::Cx, 2u, 3u));
  const auto m = compute_metrics(c);
  CHECK(m.depth == 4);
  CHECK(m.two_qubit_count == 3);
  CHECK(m.critical_path_two_qubit_count == 3);
}

TEST_CASE("metrics: disjoint CX pairs share a layer") {
  Circuit c;
  c.num_qubits = 4;
  c.ops.push_back(make_op(Gate::Cx, 0u, 1u));
  c.ops.push_back(make_op(Gate::Cx, 2u, 3u));
  const auto m = compute_metrics(c);
  CHECK(m.depth == 1);
  CHECK(m.two_qubit_count == 2);
  CHECK(m.critical_path_two_qubit_count == 1);
}

TEST_CASE("metrics: measurements occupy a layer") {
  Circuit c;
  c.num_qubits = 1;
  c.ops.push_back(make_op(Gate::X, 0u));
  c.measurements.push_back({0, 0});
  CHECK(compute_metrics(c).depth == 2);
}

TEST_CASE("metrics match the path-enumeration oracle") {
  for (std::uint64_t seed = 100; seed < 180; ++seed) {
    const auto c = random_circuit(2 + seed % 6, 4 + seed % 14, seed,
                                  seed % 3 == 0);
    const auto m = compute_metrics(c);
    const auto [depth, twoq] = qcomp::testing::enumerate_critical_paths(c);
    CHECK(m.depth == depth);
    CHECK(m.critical_path_two_qubit_count == twoq);
  }
}

TEST_CASE("depth monotonicity and path bound properties") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    auto c = random_circuit(3, 12, seed);
    const auto before = compute_metrics(c);
    CHECK(before.critical_path_two_qubit_count <=
          std::min(before.depth, before.two_qubit_count));
    c.ops.push_back(make_op(Gate::H, static_cast<std::uint32_t>(seed % 3)));
    const auto after = compute_metrics(c);
    CHECK(after.depth >= before.depth);
  }
}

TEST_CASE("circuit hash is order-sensitive") {
  Circuit a;
  a.num_qubits = 2;
  a.ops.push_back(make_op(Gate::X, 0u));
  a.ops.push_back(make_op(Gate::Y, 1u));
  Circuit b = a;
  std::swap(b.ops[0], b.ops[1]);
  CHECK(circuit_hash(a) != circuit_hash(b));
}
