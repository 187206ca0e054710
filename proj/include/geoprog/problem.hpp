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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoprog/program.hpp"

namespace geoprog {

enum class ProblemType : std::uint8_t { Angle, Length, Other };
enum class Split : std::uint8_t { Train, Val, Test };

inline constexpr std::array<ProblemType, 3> kProblemTypes{ProblemType::Angle, ProblemType::Length, ProblemType::Other};
inline constexpr std::array<Split, 3> kSplits{Split::Train, Split::Val, Split::Test};

inline constexpr std::string_view to_string(ProblemType t) noexcept {
  switch (t) {
    case ProblemType::Angle: return "angle";
    case ProblemType::Length: return "length";
    case ProblemType::Other: return "other";
  }
  return "?";
}

inline constexpr std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

inline std::optional<ProblemType> parse_problem_type(std::string_view s) noexcept {
  for (auto t : kProblemTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

inline std::optional<Split> parse_split(std::string_view s) noexcept {
  for (auto v : kSplits) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

inline constexpr std::size_t kNumOptions = 4;

// One multiple-choice geometry problem. The text and diagram are carried
// through untouched; only the numbers extracted from the text (problem_vars)
// feed the executor.
struct Problem {
  std::string id;
  std::string text;
  std::optional<std::string> diagram_path;
  std::vector<double> problem_vars;
  std::array<double, kNumOptions> options{};
  std::size_t answer_index = 0;
  std::optional<Program> gold_program;
  ProblemType problem_type = ProblemType::Other;
  std::vector<std::string> knowledge_tags;
  std::optional<std::string> explanation;
  Split split = Split::Train;
  nlohmann::json extra = nlohmann::json::object();  // unrecognised input fields

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace geoprog
