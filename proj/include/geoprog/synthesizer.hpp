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

// Brute-force program synthesis.
//
// Programs are enumerated shortest first and, within a length, in
// lexicographic token order. Arguments of commutative operations are kept
// sorted, so every program is produced in canonical form exactly once. The
// enumeration order doubles as the candidate ranking used by solve().

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoprog/executor.hpp"
#include "geoprog/problem.hpp"
#include "geoprog/program.hpp"

namespace geoprog {

inline Program canonicalize(Program p) {
  for (Step& s : p.steps) {
    if (is_valid_op(s.op) && definition(s.op).commutative) std::sort(s.args.begin(), s.args.end());
  }
  return p;
}

// One (operation, arguments) choice for a single step position.
struct StepChoice {
  Op op = Op::Equal;
  std::uint8_t arity = 0;
  std::array<Token, 3> args{};

  Step to_step() const { return Step{op, std::vector<Token>(args.begin(), args.begin() + arity)}; }
};

// Argument pool for step `position`: constants, N_0..N_{n-1}, V_0..V_{position-1}.
inline std::vector<Token> argument_pool(std::size_t num_problem_vars, std::size_t position) {
  std::vector<Token> pool;
  pool.reserve(kNumConstants + num_problem_vars + position);
  for (std::size_t i = 0; i < kNumConstants; ++i) pool.push_back(Token::constant(i));
  for (std::size_t i = 0; i < num_problem_vars; ++i) pool.push_back(Token::problem_var(static_cast<std::uint32_t>(i)));
  for (std::size_t i = 0; i < position; ++i) pool.push_back(Token::process_var(static_cast<std::uint32_t>(i)));
  return pool;
}

// All canonical choices for one step position, in lexicographic order.
inline std::vector<StepChoice> step_alphabet(std::size_t num_problem_vars, std::size_t position) {
  const std::vector<Token> pool = argument_pool(num_problem_vars, position);
  const std::size_t n = pool.size();
  std::vector<StepChoice> out;
  for (const auto& def : kOperations) {
    const auto arity = static_cast<std::size_t>(def.arity);
    std::array<std::size_t, 3> idx{};
    while (true) {
      StepChoice c{def.op, static_cast<std::uint8_t>(arity), {}};
      for (std::size_t k = 0; k < arity; ++k) c.args[k] = pool[idx[k]];
      out.push_back(c);
      // Odometer over argument indices; commutative ops keep idx non-decreasing.
      std::size_t k = arity;
      while (k > 0) {
        --k;
        if (++idx[k] < n) break;
        idx[k] = 0;
        if (k == 0) {
          k = arity + 1;
          break;
        }
      }
      if (k == arity + 1) break;
      if (def.commutative) {
        for (std::size_t m = k + 1; m < arity; ++m) idx[m] = idx[k];
      }
    }
  }
  return out;
}

// Deterministic stream of every canonical, valid program with at most
// max_steps steps.
class ProgramEnumerator {
 public:
  ProgramEnumerator(std::size_t num_problem_vars, std::size_t max_steps) : max_steps_(max_steps) {
    for (std::size_t j = 0; j < max_steps; ++j) alphabets_.push_back(step_alphabet(num_problem_vars, j));
  }

  std::optional<Program> next() {
    if (!advance()) return std::nullopt;
    Program p;
    p.steps.reserve(depth_);
    for (std::size_t j = 0; j < depth_; ++j) p.steps.push_back(alphabets_[j][odometer_[j]].to_step());
    return p;
  }

  // Number of programs with exactly `steps` steps.
  std::uint64_t count_at_depth(std::size_t steps) const {
    std::uint64_t n = steps == 0 ? 0 : 1;
    for (std::size_t j = 0; j < steps && j < alphabets_.size(); ++j) n *= alphabets_[j].size();
    return steps <= alphabets_.size() ? n : 0;
  }

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (std::size_t d = 1; d <= max_steps_; ++d) n += count_at_depth(d);
    return n;
  }

 private:
  bool advance() {
    if (done_) return false;
    if (depth_ == 0) return start_depth(1);
    for (std::size_t j = depth_; j-- > 0;) {
      if (++odometer_[j] < alphabets_[j].size()) return true;
      odometer_[j] = 0;
    }
    return start_depth(depth_ + 1);
  }

  bool start_depth(std::size_t d) {
    if (d > max_steps_) {
      done_ = true;
      return false;
    }
    depth_ = d;
    odometer_.assign(d, 0);
    return true;
  }

  std::size_t max_steps_;
  std::vector<std::vector<StepChoice>> alphabets_;
  std::vector<std::size_t> odometer_;
  std::size_t depth_ = 0;
  bool done_ = false;
};

// Convenience: the whole stream, materialised.
inline std::vector<Program> enumerate_programs(std::size_t num_problem_vars, std::size_t max_steps) {
  std::vector<Program> out;
  ProgramEnumerator e(num_problem_vars, max_steps);
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

// ---------------------------------------------------------------------------

enum class TargetMode : std::uint8_t {
  AnyOption,   // first program matching any option wins
  GoldAnswer,  // first program matching the problem's answer option wins
};

struct SolveConfig {
  std::size_t max_steps = 2;
  std::uint64_t max_candidates = 10'000'000;
  std::size_t beam_size = 10;
  MatchPolicy policy{};
  TargetMode target = TargetMode::AnyOption;

  void check() const {
    if (max_steps < 1 || max_steps > kDefaultMaxSteps) throw std::invalid_argument("max_steps must be in 1..4");
    if (max_candidates == 0) throw std::invalid_argument("max_candidates must be positive");
    if (beam_size == 0) throw std::invalid_argument("beam_size must be positive");
    if (!policy.valid()) throw std::invalid_argument("match tolerances must be non-negative");
  }
};

struct SolveResult {
  BeamOutcome outcome;
  std::uint64_t programs_tried = 0;
  std::size_t depth_reached = 0;
  std::chrono::duration<double, std::milli> elapsed{};
};

namespace detail {

class Search {
 public:
  Search(std::span<const double> vars, std::span<const double> options, std::optional<std::size_t> target,
         const SolveConfig& config)
      : vars_(vars), options_(options), target_(target), config_(config) {}

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t d = 1; d <= config_.max_steps && !stop_; ++d) {
      depth_ = d;
      while (alphabets_.size() < d) alphabets_.push_back(step_alphabet(vars_.size(), alphabets_.size()));
      subtree_.assign(d + 1, 1);
      for (std::size_t j = d; j-- > 0;) subtree_[j] = subtree_[j + 1] * alphabets_[j].size();
      chosen_.assign(d, 0);
      values_.assign(d, 0.0);
      uses_.assign(d, 0);
      visit(0);
    }
    result_.depth_reached = depth_;
    result_.elapsed = std::chrono::steady_clock::now() - start;
    return std::move(result_);
  }

 private:
  double arg_value(const Token& t) const noexcept {
    switch (t.kind) {
      case TokenKind::Constant: return kConstants[t.index].value;
      case TokenKind::ProblemVar: return vars_[t.index];
      default: return values_[t.index];
    }
  }

  bool evaluate(const StepChoice& c, double& out) const noexcept {
    double a[3];
    for (std::size_t k = 0; k < c.arity; ++k) a[k] = arg_value(c.args[k]);
    return detail::apply(c.op, a, out) == nullptr;
  }

  void mark(const StepChoice& c, int delta) noexcept {
    for (std::size_t k = 0; k < c.arity; ++k) {
      if (c.args[k].kind == TokenKind::ProcessVar) uses_[c.args[k].index] += delta;
    }
  }

  // Consumes `n` programs from the stream. Returns false when they do not
  // all fit in the budget; the search stops once the budget is spent.
  bool consume(std::uint64_t n) noexcept {
    const std::uint64_t room = config_.max_candidates - result_.programs_tried;
    if (n >= room) {
      result_.programs_tried = config_.max_candidates;
      stop_ = true;
      return n == room;
    }
    result_.programs_tried += n;
    return true;
  }

  void record_failure(AttemptFailure f) {
    if (result_.outcome.attempts.size() < config_.beam_size) {
      result_.outcome.attempts.push_back({result_.programs_tried - 1, f});
    }
  }

  void visit(std::size_t j) {
    const auto& alphabet = alphabets_[j];
    const bool last = j + 1 == depth_;
    for (std::size_t i = 0; i < alphabet.size() && !stop_; ++i) {
      const StepChoice& c = alphabet[i];
      chosen_[j] = i;
      if (!last) {
        if (!evaluate(c, values_[j])) {
          // Every completion of a failing prefix fails the same way.
          consume(subtree_[j + 1]);
          continue;
        }
        mark(c, +1);
        visit(j + 1);
        mark(c, -1);
        continue;
      }

      if (!consume(1)) return;

      // A program with an unused intermediate value computes the same final
      // value as a shorter program already tried, so it cannot be the first
      // match.
      mark(c, +1);
      bool dead = false;
      for (std::size_t k = 0; k + 1 < depth_; ++k) dead = dead || uses_[k] == 0;
      mark(c, -1);
      if (dead) continue;

      double v = 0.0;
      if (!evaluate(c, v)) {
        record_failure(AttemptFailure::DomainError);
        continue;
      }
      const auto option = match_option(v, options_, config_.policy);
      if (!option || (target_ && *option != *target_)) {
        record_failure(AttemptFailure::NoMatch);
        continue;
      }
      Program p;
      for (std::size_t k = 0; k < depth_; ++k) p.steps.push_back(alphabets_[k][chosen_[k]].to_step());
      auto& o = result_.outcome;
      o.status = BeamStatus::Answered;
      o.chosen_option = option;
      o.chosen_program = std::move(p);
      o.chosen_rank = result_.programs_tried - 1;
      stop_ = true;
    }
  }

  std::span<const double> vars_;
  std::span<const double> options_;
  std::optional<std::size_t> target_;
  const SolveConfig& config_;

  std::vector<std::vector<StepChoice>> alphabets_;
  std::vector<std::uint64_t> subtree_;
  std::vector<std::size_t> chosen_;
  std::vector<double> values_;
  std::vector<int> uses_;
  std::size_t depth_ = 0;
  bool stop_ = false;
  SolveResult result_;
};

}  // namespace detail

// Searches the enumeration stream for the first program whose value matches
// an option (or, with TargetMode::GoldAnswer, the problem's answer option).
// chosen_rank is the winner's position in the stream; attempts keeps the
// first beam_size failures. Throws std::invalid_argument on a bad config or
// when the problem does not carry exactly four options.
inline SolveResult solve(std::span<const double> problem_vars, std::span<const double> options,
                         std::optional<std::size_t> answer_index, const SolveConfig& config = {}) {
  config.check();
  if (options.size() != kNumOptions) throw std::invalid_argument("a problem needs exactly 4 options");
  std::optional<std::size_t> target;
  if (config.target == TargetMode::GoldAnswer) {
    if (!answer_index || *answer_index >= kNumOptions) {
      throw std::invalid_argument("gold-answer search needs an answer index in 0..3");
    }
    target = answer_index;
  }
  return detail::Search(problem_vars, options, target, config).run();
}

inline SolveResult solve(const Problem& problem, const SolveConfig& config = {}) {
  return solve(problem.problem_vars, problem.options, problem.answer_index, config);
}

// The first `count` programs of the stream that execute to a value, matching
// or not. This is the synthesizer's beam when it acts as a generator.
inline std::vector<Program> candidate_beam(std::span<const double> problem_vars, std::size_t max_steps,
                                           std::size_t count) {
  std::vector<Program> out;
  ProgramEnumerator e(problem_vars.size(), max_steps);
  while (out.size() < count) {
    auto p = e.next();
    if (!p) break;
    if (execute_program(*p, problem_vars, max_steps).ok()) out.push_back(std::move(*p));
  }
  return out;
}

}  // namespace geoprog
