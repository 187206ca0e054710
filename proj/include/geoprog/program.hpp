// Copyright 2026 The geoprog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Program model: tokens, steps, programs, and their text form.
//
// Surface syntax, one step per `;` or newline:
//
//     Minus(C_180, N_0); Half(V_0)
//
// Arguments are problem variables `N_i`, process variables `V_j` (the value
// of step j) or one of the predefined constants. parse_program only checks
// structure (names, arity, token kinds); index ranges and forward references
// are reported by validate().

#pragma once

#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geoprog/operations.hpp"

namespace geoprog {

inline constexpr std::size_t kDefaultMaxSteps = 4;

enum class TokenKind : std::uint8_t { Operation, Constant, ProblemVar, ProcessVar };

// One atom of a program. Ordering is the vocabulary order: operations in
// table order, then constants, then N_0.., then V_0...
struct Token {
  TokenKind kind = TokenKind::Constant;
  std::uint32_t index = 0;

  static constexpr Token operation(Op op) noexcept {
    return {TokenKind::Operation, static_cast<std::uint32_t>(op)};
  }
  static constexpr Token constant(std::size_t i) noexcept {
    return {TokenKind::Constant, static_cast<std::uint32_t>(i)};
  }
  static constexpr Token problem_var(std::uint32_t i) noexcept { return {TokenKind::ProblemVar, i}; }
  static constexpr Token process_var(std::uint32_t i) noexcept { return {TokenKind::ProcessVar, i}; }

  friend constexpr auto operator<=>(const Token&, const Token&) = default;
};

inline std::string to_string(const Token& t) {
  switch (t.kind) {
    case TokenKind::Operation:
      return is_valid_op(static_cast<Op>(t.index))
                 ? std::string(definition(static_cast<Op>(t.index)).name)
                 : "<op#" + std::to_string(t.index) + ">";
    case TokenKind::Constant:
      return t.index < kNumConstants ? std::string(kConstants[t.index].name)
                                     : "<const#" + std::to_string(t.index) + ">";
    case TokenKind::ProblemVar: return "N_" + std::to_string(t.index);
    case TokenKind::ProcessVar: return "V_" + std::to_string(t.index);
  }
  return "?";
}

namespace detail {

inline std::optional<std::uint32_t> parse_index(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace detail

// Parses a single token name: an operation, a constant, N_i or V_j.
inline std::optional<Token> parse_token(std::string_view text) {
  if (auto op = find_operation(text)) return Token::operation(*op);
  if (auto c = find_constant(text)) return Token::constant(*c);
  if (text.size() > 2 && text[1] == '_' && (text[0] == 'N' || text[0] == 'V')) {
    auto idx = detail::parse_index(text.substr(2));
    if (!idx) return std::nullopt;
    return text[0] == 'N' ? Token::problem_var(*idx) : Token::process_var(*idx);
  }
  return std::nullopt;
}

struct Step {
  Op op = Op::Equal;
  std::vector<Token> args;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Program {
  std::vector<Step> steps;

  std::size_t size() const noexcept { return steps.size(); }
  bool empty() const noexcept { return steps.empty(); }

  friend bool operator==(const Program&, const Program&) = default;
};

// Number of operations (steps) in a program.
inline std::size_t operation_count(const Program& p) noexcept { return p.steps.size(); }

// Total token count: every step contributes its operator plus its arguments.
inline std::size_t program_length(const Program& p) noexcept {
  std::size_t n = 0;
  for (const auto& s : p.steps) n += 1 + s.args.size();
  return n;
}

// ---------------------------------------------------------------------------
// Parsing

enum class ParseErrorKind : std::uint8_t { Empty, Lexical, Arity, Syntax };

inline constexpr std::string_view to_string(ParseErrorKind k) noexcept {
  switch (k) {
    case ParseErrorKind::Empty: return "Empty";
    case ParseErrorKind::Lexical: return "Lexical";
    case ParseErrorKind::Arity: return "Arity";
    case ParseErrorKind::Syntax: return "Syntax";
  }
  return "?";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t step, std::size_t offset, const std::string& what)
      : std::runtime_error(what), kind_(kind), step_(step), offset_(offset) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t step() const noexcept { return step_; }
  // Byte offset into the input text.
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t step_;
  std::size_t offset_;
};

namespace detail {

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : text_(text) {}

  Program parse() {
    Program program;
    skip_space(true);
    if (at_end()) fail(ParseErrorKind::Empty, "empty program");
    while (true) {
      program.steps.push_back(parse_step(program.steps.size()));
      skip_space(false);
      if (at_end()) break;
      const char sep = text_[pos_];
      if (sep != ';' && sep != '\n') {
        fail(ParseErrorKind::Syntax, "expected ';' or newline between steps");
      }
      ++pos_;
      skip_space(true);
      if (at_end()) {
        if (sep == ';') fail(ParseErrorKind::Syntax, "expected a step after ';'");
        break;
      }
      // Blank lines are fine, ";;" is an empty step.
      if (text_[pos_] == ';') fail(ParseErrorKind::Syntax, "empty step");
    }
    return program;
  }

 private:
  static bool is_ident_char(char c) noexcept {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }

  void skip_space(bool newlines) {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(ParseErrorKind kind, const std::string& msg) const { fail_at(kind, pos_, msg); }

  [[noreturn]] void fail_at(ParseErrorKind kind, std::size_t offset, const std::string& msg) const {
    throw ParseError(kind, step_, offset,
                     "step " + std::to_string(step_) + ", offset " + std::to_string(offset) + ": " + msg);
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space(false);
    if (at_end() || text_[pos_] != c) fail(ParseErrorKind::Syntax, std::string("expected '") + c + "'");
    ++pos_;
  }

  Step parse_step(std::size_t index) {
    step_ = index;
    skip_space(false);
    const std::size_t op_offset = pos_;
    const std::string_view name = identifier();
    if (name.empty()) fail(ParseErrorKind::Syntax, "expected an operation name");
    const auto op = find_operation(name);
    if (!op) fail_at(ParseErrorKind::Lexical, op_offset, "unknown operation '" + std::string(name) + "'");

    Step step{*op, {}};
    expect('(');
    while (true) {
      skip_space(false);
      const std::size_t arg_offset = pos_;
      const std::string_view arg = identifier();
      if (arg.empty()) fail(ParseErrorKind::Syntax, "expected an argument");
      const auto tok = parse_token(arg);
      if (!tok) fail_at(ParseErrorKind::Lexical, arg_offset, "unknown token '" + std::string(arg) + "'");
      if (tok->kind == TokenKind::Operation) {
        fail_at(ParseErrorKind::Lexical, arg_offset,
                "operation '" + std::string(arg) + "' cannot be an argument");
      }
      step.args.push_back(*tok);
      skip_space(false);
      if (at_end()) fail(ParseErrorKind::Syntax, "unterminated argument list");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail(ParseErrorKind::Syntax, "expected ',' or ')'");
    }
    const auto& def = definition(*op);
    if (step.args.size() != static_cast<std::size_t>(def.arity)) {
      fail_at(ParseErrorKind::Arity, op_offset,
              std::string(def.name) + " takes " + std::to_string(def.arity) + " argument(s), got " +
                  std::to_string(step.args.size()));
    }
    return step;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t step_ = 0;
};

}  // namespace detail

// Throws ParseError.
inline Program parse_program(std::string_view text) { return detail::ProgramParser(text).parse(); }

// A candidate program as produced by a generator: either parsed or the
// reason it could not be.
using Candidate = std::variant<Program, ParseError>;

inline Candidate try_parse_program(std::string_view text) {
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    return e;
  }
}

inline std::string serialize_step(const Step& s) {
  std::string out = is_valid_op(s.op) ? std::string(definition(s.op).name) : to_string(Token::operation(s.op));
  out += '(';
  for (std::size_t i = 0; i < s.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.args[i]);
  }
  out += ')';
  return out;
}

inline std::string serialize_program(const Program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (i) out += "; ";
    out += serialize_step(p.steps[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class IssueKind : std::uint8_t {
  BadArity,
  UnknownOperation,
  UnknownConstant,
  ForwardReference,
  ProblemVarOutOfRange,
  TooManySteps,
  EmptyProgram,
  OperationAsArgument,
};

inline constexpr std::string_view to_string(IssueKind k) noexcept {
  switch (k) {
    case IssueKind::BadArity: return "BadArity";
    case IssueKind::UnknownOperation: return "UnknownOperation";
    case IssueKind::UnknownConstant: return "UnknownConstant";
    case IssueKind::ForwardReference: return "ForwardReference";
    case IssueKind::ProblemVarOutOfRange: return "ProblemVarOutOfRange";
    case IssueKind::TooManySteps: return "TooManySteps";
    case IssueKind::EmptyProgram: return "EmptyProgram";
    case IssueKind::OperationAsArgument: return "OperationAsArgument";
  }
  return "?";
}

struct ValidationIssue {
  std::size_t step = 0;
  IssueKind kind = IssueKind::BadArity;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  bool has(IssueKind k) const noexcept {
    for (const auto& i : issues) {
      if (i.kind == k) return true;
    }
    return false;
  }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

inline ValidationReport validate(const Program& p, std::size_t num_problem_vars,
                                 std::size_t max_steps = kDefaultMaxSteps) {
  ValidationReport report;
  auto add = [&](std::size_t step, IssueKind kind, std::string msg) {
    report.issues.push_back({step, kind, std::move(msg)});
  };

  if (p.steps.empty()) add(0, IssueKind::EmptyProgram, "program has no steps");
  if (p.steps.size() > max_steps) {
    add(max_steps, IssueKind::TooManySteps,
        std::to_string(p.steps.size()) + " steps exceed the limit of " + std::to_string(max_steps));
  }

  for (std::size_t j = 0; j < p.steps.size(); ++j) {
    const Step& s = p.steps[j];
    if (!is_valid_op(s.op)) {
      add(j, IssueKind::UnknownOperation, "operation id " + std::to_string(static_cast<int>(s.op)));
    } else if (s.args.size() != static_cast<std::size_t>(definition(s.op).arity)) {
      add(j, IssueKind::BadArity,
          std::string(definition(s.op).name) + " takes " + std::to_string(definition(s.op).arity) +
              " argument(s), got " + std::to_string(s.args.size()));
    }
    for (const Token& t : s.args) {
      switch (t.kind) {
        case TokenKind::Operation:
          add(j, IssueKind::OperationAsArgument, to_string(t) + " used as an argument");
          break;
        case TokenKind::Constant:
          if (t.index >= kNumConstants) add(j, IssueKind::UnknownConstant, to_string(t));
          break;
        case TokenKind::ProblemVar:
          if (t.index >= num_problem_vars) {
            add(j, IssueKind::ProblemVarOutOfRange,
                to_string(t) + " but the problem has " + std::to_string(num_problem_vars) + " variable(s)");
          }
          break;
        case TokenKind::ProcessVar:
          if (t.index >= j) add(j, IssueKind::ForwardReference, to_string(t) + " is not bound before step " + std::to_string(j));
          break;
      }
    }
  }
  return report;
}

// Every token usable in programs over `num_problem_vars` variables with at
// most `max_steps` steps, in vocabulary order.
inline std::vector<Token> token_vocabulary(std::size_t num_problem_vars, std::size_t max_steps) {
  std::vector<Token> out;
  out.reserve(kNumOperations + kNumConstants + num_problem_vars + max_steps);
  for (const auto& def : kOperations) out.push_back(Token::operation(def.op));
  for (std::size_t i = 0; i < kNumConstants; ++i) out.push_back(Token::constant(i));
  for (std::size_t i = 0; i < num_problem_vars; ++i) out.push_back(Token::problem_var(static_cast<std::uint32_t>(i)));
  for (std::size_t i = 0; i + 1 < max_steps; ++i) out.push_back(Token::process_var(static_cast<std::uint32_t>(i)));
  return out;
}

}  // namespace geoprog
