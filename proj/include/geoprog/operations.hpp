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
#include <numbers>
#include <optional>
#include <string_view>

namespace geoprog {

// Operation identifiers, in the fixed table order. The numeric value of each
// enumerator is its position in the token vocabulary.
enum class Op : std::uint8_t {
  Equal,
  Double,
  Half,
  Add,
  Minus,
  Multiply,
  Divide,
  Sin,
  Cos,
  Tan,
  ArcSin,
  ArcCos,
  PythagoreanAdd,
  PythagoreanMinus,
  Proportion,
  CircleArea,
  CirclePerimeter,
  ConeArea,
};

enum class Category : std::uint8_t { Basic, Arithmetic, Trigonometric, TheoremFormula };

struct OperationDef {
  Op op;
  std::string_view name;
  int arity;
  Category category;
  bool commutative;  // argument order never changes the value
};

inline constexpr std::size_t kNumOperations = 18;

inline constexpr std::array<OperationDef, kNumOperations> kOperations{{
    {Op::Equal, "Equal", 1, Category::Basic, false},
    {Op::Double, "Double", 1, Category::Basic, false},
    {Op::Half, "Half", 1, Category::Basic, false},
    {Op::Add, "Add", 2, Category::Arithmetic, true},
    {Op::Minus, "Minus", 2, Category::Arithmetic, false},
    {Op::Multiply, "Multiply", 2, Category::Arithmetic, true},
    {Op::Divide, "Divide", 2, Category::Arithmetic, false},
    {Op::Sin, "Sin", 1, Category::Trigonometric, false},
    {Op::Cos, "Cos", 1, Category::Trigonometric, false},
    {Op::Tan, "Tan", 1, Category::Trigonometric, false},
    {Op::ArcSin, "ArcSin", 1, Category::Trigonometric, false},
    {Op::ArcCos, "ArcCos", 1, Category::Trigonometric, false},
    {Op::PythagoreanAdd, "PythagoreanAdd", 2, Category::TheoremFormula, true},
    {Op::PythagoreanMinus, "PythagoreanMinus", 2, Category::TheoremFormula, false},
    {Op::Proportion, "Proportion", 3, Category::TheoremFormula, false},
    {Op::CircleArea, "CircleArea", 1, Category::TheoremFormula, false},
    {Op::CirclePerimeter, "CirclePerimeter", 1, Category::TheoremFormula, false},
    // ConeArea is symmetric in value, but (radius, slant) is kept ordered so
    // the canonical form matches the annotation convention.
    {Op::ConeArea, "ConeArea", 2, Category::TheoremFormula, false},
}};

inline constexpr bool is_valid_op(Op op) noexcept {
  return static_cast<std::size_t>(op) < kNumOperations;
}

inline constexpr const OperationDef& definition(Op op) noexcept {
  return kOperations[static_cast<std::size_t>(op)];
}

inline constexpr std::optional<Op> find_operation(std::string_view name) noexcept {
  for (const auto& def : kOperations) {
    if (def.name == name) return def.op;
  }
  return std::nullopt;
}

inline constexpr std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::Basic: return "Basic";
    case Category::Arithmetic: return "Arithmetic";
    case Category::Trigonometric: return "Trigonometric";
    case Category::TheoremFormula: return "TheoremFormula";
  }
  return "?";
}

// Predefined constants. Degree constants are plain numbers; the executor
// interprets every angle in degrees.
struct ConstantDef {
  std::string_view name;
  double value;
};

inline constexpr std::size_t kNumConstants = 7;

inline constexpr std::array<ConstantDef, kNumConstants> kConstants{{
    {"C_30", 30.0},
    {"C_60", 60.0},
    {"C_90", 90.0},
    {"C_180", 180.0},
    {"C_360", 360.0},
    {"C_PI", std::numbers::pi},
    {"C_0618", 0.618},
}};

inline constexpr std::optional<std::size_t> find_constant(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kConstants.size(); ++i) {
    if (kConstants[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace geoprog
