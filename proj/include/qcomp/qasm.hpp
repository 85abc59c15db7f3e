// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_QASM_HPP
#define QCOMP_QASM_HPP

#include "qcomp/circuit.hpp"

#include <stdexcept>
#include <string>

namespace qcomp {

class QasmError : public std::runtime_error {
public:
  QasmError(int line, int column, const std::string& message)
      : std::runtime_error("qasm:" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line(line), column(column) {}

  int line;
  int column;
};

/// Parses the OpenQASM 2.0 subset: header, optional qelib1 include,
/// qreg/creg declarations (flattened into one 0-based index space in
/// declaration order), gate applications from the supported vocabulary,
/// indexed measurements, and barriers (parsed and dropped). Parameter
/// expressions support pi, numeric literals, parentheses, unary minus and
/// the four basic operators.
Circuit parse_qasm(const std::string& text);

/// Emits source that parses back to an op-for-op identical circuit.
std::string serialize_qasm(const Circuit& c);

/// Formats a parameter with enough digits to round-trip exactly.
std::string format_param(double value);

} // namespace qcomp

#endif
