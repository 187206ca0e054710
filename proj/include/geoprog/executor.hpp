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

// Program execution, option matching and beam selection.
//
// All angles are in degrees. A program either produces a value, fails
// statically (GrammarError, nothing is executed) or fails at run time
// (DomainError, with the values computed so far kept in the trace).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geoprog/operations.hpp"
#include "geoprog/program.hpp"

namespace geoprog {

struct MatchPolicy {
  double abs_tol = 1e-2;
  double rel_tol = 1e-4;

  bool valid() const noexcept { return abs_tol >= 0.0 && rel_tol >= 0.0; }
};

inline constexpr double kDenominatorEpsilon = 1e-12;
inline constexpr double kTanPoleEpsilon = 1e-9;  // degrees

namespace detail {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Reduces an angle to (-180, 180].
inline double reduce_degrees(double a) noexcept {
  double r = std::remainder(a, 360.0);
  if (r == -180.0) r = 180.0;
  return r;
}

// sin/cos of whole multiples of 30 degrees are returned exactly where the
// exact value is representable (0, +-1/2, +-1).
inline double sin_degrees(double a) noexcept {
  const double r = reduce_degrees(a);
  if (r == 0.0 || r == 180.0) return 0.0;
  if (r == 30.0 || r == 150.0) return 0.5;
  if (r == -30.0 || r == -150.0) return -0.5;
  if (r == 90.0) return 1.0;
  if (r == -90.0) return -1.0;
  return std::sin(r * kDegToRad);
}

inline double cos_degrees(double a) noexcept {
  const double r = reduce_degrees(a);
  if (r == 0.0) return 1.0;
  if (r == 180.0) return -1.0;
  if (r == 60.0 || r == -60.0) return 0.5;
  if (r == 120.0 || r == -120.0) return -0.5;
  if (r == 90.0 || r == -90.0) return 0.0;
  return std::cos(r * kDegToRad);
}

// Core step evaluation. Returns nullptr on success, otherwise a static
// description of the domain failure.
inline const char* apply(Op op, const double* a, double& out) noexcept {
  switch (op) {
    case Op::Equal: out = a[0]; break;
    case Op::Double: out = 2.0 * a[0]; break;
    case Op::Half: out = a[0] / 2.0; break;
    case Op::Add: out = a[0] + a[1]; break;
    case Op::Minus: out = a[0] - a[1]; break;
    case Op::Multiply: out = a[0] * a[1]; break;
    case Op::Divide:
      if (std::fabs(a[1]) < kDenominatorEpsilon) return "division by zero";
      out = a[0] / a[1];
      break;
    case Op::Sin: out = sin_degrees(a[0]); break;
    case Op::Cos: out = cos_degrees(a[0]); break;
    case Op::Tan: {
      if (std::fabs(std::remainder(a[0] - 90.0, 180.0)) < kTanPoleEpsilon) return "tangent pole";
      out = sin_degrees(a[0]) / cos_degrees(a[0]);
      break;
    }
    case Op::ArcSin:
      if (!(std::fabs(a[0]) <= 1.0)) return "arcsin argument outside [-1, 1]";
      out = std::asin(a[0]) * kRadToDeg;
      break;
    case Op::ArcCos:
      if (!(std::fabs(a[0]) <= 1.0)) return "arccos argument outside [-1, 1]";
      out = std::acos(a[0]) * kRadToDeg;
      break;
    case Op::PythagoreanAdd: out = std::hypot(a[0], a[1]); break;
    case Op::PythagoreanMinus: {
      const double d = a[0] * a[0] - a[1] * a[1];
      if (d < 0.0) return "square root of a negative number";
      out = std::sqrt(d);
      break;
    }
    case Op::Proportion:
      if (std::fabs(a[2]) < kDenominatorEpsilon) return "division by zero";
      out = a[0] * a[1] / a[2];
      break;
    case Op::CircleArea: out = std::numbers::pi * a[0] * a[0]; break;
    case Op::CirclePerimeter: out = 2.0 * std::numbers::pi * a[0]; break;
    case Op::ConeArea: out = std::numbers::pi * a[0] * a[1]; break;
    default: return "unknown operation";
  }
  if (!std::isfinite(out)) return "non-finite result";
  return nullptr;
}

}  // namespace detail

struct StepResult {
  std::optional<double> value;
  std::string_view error;  // set when value is empty

  explicit operator bool() const noexcept { return value.has_value(); }
};

inline StepResult execute_step(Op op, std::span<const double> args) {
  if (!is_valid_op(op)) return {std::nullopt, "unknown operation"};
  if (args.size() != static_cast<std::size_t>(definition(op).arity)) return {std::nullopt, "arity mismatch"};
  for (double a : args) {
    if (!std::isfinite(a)) return {std::nullopt, "non-finite argument"};
  }
  double out = 0.0;
  if (const char* err = detail::apply(op, args.data(), out)) return {std::nullopt, err};
  return {out, {}};
}

// ---------------------------------------------------------------------------

enum class ExecStatus : std::uint8_t { Value, GrammarError, DomainError };

inline constexpr std::string_view to_string(ExecStatus s) noexcept {
  switch (s) {
    case ExecStatus::Value: return "Value";
    case ExecStatus::GrammarError: return "GrammarError";
    case ExecStatus::DomainError: return "DomainError";
  }
  return "?";
}

struct ExecutionError {
  std::size_t step = 0;
  std::string reason;

  friend bool operator==(const ExecutionError&, const ExecutionError&) = default;
};

struct ExecutionOutcome {
  ExecStatus status = ExecStatus::GrammarError;
  std::vector<double> trace;           // v_0 .. v_{T-1}
  std::optional<double> final_value;   // iff status == Value
  std::optional<ExecutionError> error; // iff status != Value

  bool ok() const noexcept { return status == ExecStatus::Value; }

  friend bool operator==(const ExecutionOutcome&, const ExecutionOutcome&) = default;
};

namespace detail {

inline double resolve(const Token& t, std::span<const double> vars, const std::vector<double>& trace) noexcept {
  switch (t.kind) {
    case TokenKind::Constant: return kConstants[t.index].value;
    case TokenKind::ProblemVar: return vars[t.index];
    case TokenKind::ProcessVar: return trace[t.index];
    case TokenKind::Operation: break;
  }
  return std::nan("");
}

}  // namespace detail

inline ExecutionOutcome execute_program(const Program& p, std::span<const double> problem_vars,
                                        std::size_t max_steps = kDefaultMaxSteps) {
  ExecutionOutcome out;
  const ValidationReport report = validate(p, problem_vars.size(), max_steps);
  if (!report.ok()) {
    const auto& first = report.issues.front();
    out.status = ExecStatus::GrammarError;
    out.error = ExecutionError{first.step, std::string(to_string(first.kind)) + ": " + first.message};
    return out;
  }

  out.trace.reserve(p.steps.size());
  for (std::size_t j = 0; j < p.steps.size(); ++j) {
    const Step& s = p.steps[j];
    double args[3] = {};
    bool finite = true;
    for (std::size_t k = 0; k < s.args.size(); ++k) {
      args[k] = detail::resolve(s.args[k], problem_vars, out.trace);
      finite = finite && std::isfinite(args[k]);
    }
    double value = 0.0;
    const char* err = finite ? detail::apply(s.op, args, value) : "non-finite argument";
    if (err) {
      out.status = ExecStatus::DomainError;
      out.error = ExecutionError{j, err};
      return out;
    }
    out.trace.push_back(value);
  }
  out.status = ExecStatus::Value;
  out.final_value = out.trace.back();
  return out;
}

// Index of the option closest to `value` among those within tolerance,
// lowest index on ties.
inline std::optional<std::size_t> match_option(double value, std::span<const double> options,
                                               const MatchPolicy& policy = {}) noexcept {
  if (!std::isfinite(value)) return std::nullopt;
  std::optional<std::size_t> best;
  double best_delta = 0.0;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double c = options[i];
    if (!std::isfinite(c)) continue;
    const double delta = std::fabs(value - c);
    if (delta <= std::max(policy.abs_tol, policy.rel_tol * std::fabs(c)) && (!best || delta < best_delta)) {
      best = i;
      best_delta = delta;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Beam selection

enum class BeamStatus : std::uint8_t { Answered, NoResult };

inline constexpr std::string_view to_string(BeamStatus s) noexcept {
  return s == BeamStatus::Answered ? "Answered" : "NoResult";
}

enum class AttemptFailure : std::uint8_t { GrammarError, DomainError, NoMatch };

inline constexpr std::string_view to_string(AttemptFailure f) noexcept {
  switch (f) {
    case AttemptFailure::GrammarError: return "GrammarError";
    case AttemptFailure::DomainError: return "DomainError";
    case AttemptFailure::NoMatch: return "NoMatch";
  }
  return "?";
}

struct Attempt {
  std::size_t rank = 0;
  AttemptFailure failure = AttemptFailure::GrammarError;

  friend bool operator==(const Attempt&, const Attempt&) = default;
};

struct BeamOutcome {
  BeamStatus status = BeamStatus::NoResult;
  std::optional<std::size_t> chosen_option;
  std::optional<Program> chosen_program;
  std::optional<std::size_t> chosen_rank;
  std::vector<Attempt> attempts;  // failed candidates, in rank order

  bool answered() const noexcept { return status == BeamStatus::Answered; }

  friend bool operator==(const BeamOutcome&, const BeamOutcome&) = default;
};

namespace detail {

inline const Program* candidate_program(const Program& p) noexcept { return &p; }
inline const Program* candidate_program(const Candidate& c) noexcept { return std::get_if<Program>(&c); }

template <class C>
BeamOutcome execute_beam_impl(std::span<const C> candidates, std::span<const double> problem_vars,
                              std::span<const double> options, const MatchPolicy& policy) {
  BeamOutcome out;
  for (std::size_t rank = 0; rank < candidates.size(); ++rank) {
    const Program* p = candidate_program(candidates[rank]);
    if (!p) {
      out.attempts.push_back({rank, AttemptFailure::GrammarError});
      continue;
    }
    const ExecutionOutcome exec = execute_program(*p, problem_vars);
    if (!exec.ok()) {
      out.attempts.push_back(
          {rank, exec.status == ExecStatus::GrammarError ? AttemptFailure::GrammarError : AttemptFailure::DomainError});
      continue;
    }
    const auto option = match_option(*exec.final_value, options, policy);
    if (!option) {
      out.attempts.push_back({rank, AttemptFailure::NoMatch});
      continue;
    }
    out.status = BeamStatus::Answered;
    out.chosen_option = option;
    out.chosen_program = *p;
    out.chosen_rank = rank;
    return out;
  }
  return out;
}

}  // namespace detail

// The first candidate (in rank order) that executes to a value matching an
// option decides the answer; if none does the result is NoResult.
inline BeamOutcome execute_beam(std::span<const Candidate> candidates, std::span<const double> problem_vars,
                                std::span<const double> options, const MatchPolicy& policy = {}) {
  return detail::execute_beam_impl(candidates, problem_vars, options, policy);
}

inline BeamOutcome execute_beam(std::span<const Program> candidates, std::span<const double> problem_vars,
                                std::span<const double> options, const MatchPolicy& policy = {}) {
  return detail::execute_beam_impl(candidates, problem_vars, options, policy);
}

}  // namespace geoprog
