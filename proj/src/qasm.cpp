// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace qcomp {

namespace {

struct Token {
  enum class Kind {
    Identifier,
    Number,
    String,
    Symbol, // single-char punctuation
    Arrow,  // ->
    End,
  };

  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= src_.size()) {
      return tok;
    }
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = Token::Kind::Identifier;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        tok.text += advance();
      }
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      tok.kind = Token::Kind::Number;
      std::string text;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E' ||
              ((src_[pos_] == '+' || src_[pos_] == '-') && !text.empty() &&
               (text.back() == 'e' || text.back() == 'E')))) {
        text += advance();
      }
      char* end = nullptr;
      tok.number = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size()) {
        throw QasmError(tok.line, tok.column, "malformed number '" + text + "'");
      }
      tok.text = text;
      return tok;
    }
    if (c == '"') {
      tok.kind = Token::Kind::String;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') {
        tok.text += advance();
      }
      if (pos_ >= src_.size()) {
        throw QasmError(tok.line, tok.column, "unterminated string");
      }
      advance();
      return tok;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok.kind = Token::Kind::Arrow;
      tok.text = "->";
      advance();
      advance();
      return tok;
    }
    tok.kind = Token::Kind::Symbol;
    tok.text = advance();
    return tok;
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_ws_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct Register {
  std::uint32_t offset = 0;
  std::uint32_t size = 0;
};

class Parser {
public:
  explicit Parser(const std::string& src) : lexer_(src) { consume(); }

  Circuit parse() {
    expect_identifier("OPENQASM");
    const Token version = expect(Token::Kind::Number);
    if (version.text != "2.0") {
      throw QasmError(version.line, version.column,
                      "unsupported OPENQASM version '" + version.text + "'");
    }
    expect_symbol(";");

    Circuit circuit;
    while (current_.kind != Token::Kind::End) {
      statement(circuit);
    }
    circuit.num_qubits = qubit_count_;
    circuit.validate();
    return circuit;
  }

private:
  void statement(Circuit& circuit) {
    const Token tok = expect(Token::Kind::Identifier);
    if (tok.text == "include") {
      expect(Token::Kind::String);
      expect_symbol(";");
      return;
    }
    if (tok.text == "qreg" || tok.text == "creg") {
      const Token name = expect(Token::Kind::Identifier);
      expect_symbol("[");
      const Token size = expect(Token::Kind::Number);
      expect_symbol("]");
      expect_symbol(";");
      const auto n = static_cast<std::uint32_t>(size.number);
      if (n == 0 || size.number != std::floor(size.number)) {
        throw QasmError(size.line, size.column, "register size must be a positive integer");
      }
      auto& table = tok.text == "qreg" ? qregs_ : cregs_;
      auto& count = tok.text == "qreg" ? qubit_count_ : cbit_count_;
      if (table.count(name.text) != 0) {
        throw QasmError(name.line, name.column, "register '" + name.text + "' redeclared");
      }
      table[name.text] = Register{count, n};
      count += n;
      return;
    }
    if (tok.text == "barrier") {
      // Parsed and dropped; arguments are skipped up to the semicolon.
      while (current_.kind != Token::Kind::End &&
             !(current_.kind == Token::Kind::Symbol && current_.text == ";")) {
        consume();
      }
      expect_symbol(";");
      return;
    }
    if (tok.text == "measure") {
      const auto q = qubit_operand();
      if (current_.kind != Token::Kind::Arrow) {
        throw QasmError(current_.line, current_.column, "expected '->' in measure");
      }
      consume();
      const auto c = cbit_operand();
      expect_symbol(";");
      circuit.measurements.push_back(Measurement{q, c});
      return;
    }
    gate_statement(circuit, tok);
  }

  void gate_statement(Circuit& circuit, const Token& name) {
    if (!is_gate_name(name.text)) {
      throw QasmError(name.line, name.column, "unsupported gate '" + name.text + "'");
    }
    const Gate gate = gate_from_name(name.text);
    const auto& info = gate_info(gate);

    double param = 0.0;
    if (current_.kind == Token::Kind::Symbol && current_.text == "(") {
      if (info.num_params == 0) {
        throw QasmError(current_.line, current_.column,
                        "gate '" + name.text + "' takes no parameters");
      }
      consume();
      param = expression();
      expect_symbol(")");
      if (!std::isfinite(param)) {
        throw QasmError(name.line, name.column, "non-finite parameter expression");
      }
    } else if (info.num_params == 1) {
      throw QasmError(current_.line, current_.column,
                      "gate '" + name.text + "' requires a parameter");
    }

    std::vector<std::uint32_t> qubits;
    qubits.push_back(qubit_operand());
    while (current_.kind == Token::Kind::Symbol && current_.text == ",") {
      consume();
      qubits.push_back(qubit_operand());
    }
    expect_symbol(";");
    if (static_cast<int>(qubits.size()) != info.num_qubits) {
      throw QasmError(name.line, name.column,
                      "gate '" + name.text + "' expects " +
                          std::to_string(info.num_qubits) + " qubit argument(s)");
    }
    if (info.num_qubits == 2 && qubits[0] == qubits[1]) {
      throw QasmError(name.line, name.column,
                      "multi-qubit op references the same qubit twice");
    }
    GateOp op;
    op.gate = gate;
    op.param = param;
    op.q0 = qubits[0];
    op.q1 = info.num_qubits == 2 ? qubits[1] : qubits[0];
    circuit.ops.push_back(op);
  }

  std::uint32_t qubit_operand() { return indexed_operand(qregs_, "qubit"); }
  std::uint32_t cbit_operand() { return indexed_operand(cregs_, "classical"); }

  std::uint32_t indexed_operand(const std::map<std::string, Register>& table,
                                const char* what) {
    const Token name = expect(Token::Kind::Identifier);
    const auto it = table.find(name.text);
    if (it == table.end()) {
      throw QasmError(name.line, name.column,
                      std::string("unknown ") + what + " register '" + name.text + "'");
    }
    expect_symbol("[");
    const Token idx = expect(Token::Kind::Number);
    expect_symbol("]");
    const auto i = static_cast<std::uint32_t>(idx.number);
    if (idx.number != std::floor(idx.number) || i >= it->second.size) {
      throw QasmError(idx.line, idx.column,
                      "index out of range for register '" + name.text + "'");
    }
    return it->second.offset + i;
  }

  // Expression grammar: term (('+'|'-') term)*; term: factor (('*'|'/') factor)*;
  // factor: ('-')* (number | pi | '(' expression ')').
  double expression() {
    double value = term();
    while (current_.kind == Token::Kind::Symbol &&
           (current_.text == "+" || current_.text == "-")) {
      const bool add = current_.text == "+";
      consume();
      const double rhs = term();
      value = add ? value + rhs : value - rhs;
    }
    return value;
  }

  double term() {
    double value = factor();
    while (current_.kind == Token::Kind::Symbol &&
           (current_.text == "*" || current_.text == "/")) {
      const bool mul = current_.text == "*";
      consume();
      const double rhs = factor();
      value = mul ? value * rhs : value / rhs;
    }
    return value;
  }

  double factor() {
    if (current_.kind == Token::Kind::Symbol && current_.text == "-") {
      consume();
      return -factor();
    }
    if (current_.kind == Token::Kind::Symbol && current_.text == "(") {
      consume();
      const double value = expression();
      expect_symbol(")");
      return value;
    }
    if (current_.kind == Token::Kind::Number) {
      const double value = current_.number;
      consume();
      return value;
    }
    if (current_.kind == Token::Kind::Identifier && current_.text == "pi") {
      consume();
      return 3.14159265358979323846;
    }
    throw QasmError(current_.line, current_.column,
                    "expected number, 'pi', or parenthesized expression");
  }

  Token expect(Token::Kind kind) {
    if (current_.kind != kind) {
      throw QasmError(current_.line, current_.column,
                      "unexpected token '" + current_.text + "'");
    }
    Token tok = current_;
    consume();
    return tok;
  }

  void expect_identifier(const std::string& text) {
    if (current_.kind != Token::Kind::Identifier || current_.text != text) {
      throw QasmError(current_.line, current_.column, "expected '" + text + "'");
    }
    consume();
  }

  void expect_symbol(const std::string& text) {
    if (current_.kind != Token::Kind::Symbol || current_.text != text) {
      throw QasmError(current_.line, current_.column, "expected '" + text + "'");
    }
    consume();
  }

  void consume() { current_ = lexer_.next(); }

  Lexer lexer_;
  Token current_;
  std::map<std::string, Register> qregs_;
  std::map<std::string, Register> cregs_;
  std::uint32_t qubit_count_ = 0;
  std::uint32_t cbit_count_ = 0;
};

} // namespace

Circuit parse_qasm(const std::string& text) { return Parser(text).parse(); }

std::string format_param(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // %.17g always round-trips; shorten when fewer digits already do.
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) {
      return {shorter};
    }
  }
  return {buf};
}

std::string serialize_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.num_qubits << "];\n";
  std::uint32_t num_cbits = 0;
  for (const auto& m : c.measurements) {
    num_cbits = std::max(num_cbits, m.cbit + 1);
  }
  if (num_cbits > 0) {
    out << "creg c[" << num_cbits << "];\n";
  }
  for (const auto& op : c.ops) {
    const auto& info = gate_info(op.gate);
    out << info.name;
    if (info.num_params == 1) {
      out << "(" << format_param(op.param) << ")";
    }
    out << " q[" << op.q0 << "]";
    if (info.num_qubits == 2) {
      out << ",q[" << op.q1 << "]";
    }
    out << ";\n";
  }
  for (const auto& m : c.measurements) {
    out << "measure q[" << m.qubit << "] -> c[" << m.cbit << "];\n";
  }
  return out.str();
}

} // namespace qcomp
