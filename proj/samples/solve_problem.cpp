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

// Parses and runs a hand-written program, then asks the synthesizer to find
// one for the same problem.

#include <iostream>
#include <vector>

#include "geoprog/geoprog.hpp"

int main() {
  using namespace geoprog;

  // Isosceles triangle, apex angle 100 degrees: find a base angle.
  const std::vector<double> vars{100};
  const std::vector<double> options{50, 40, 30, 60};

  const Program gold = parse_program("Minus(C_180,N_0);Half(V_0)");
  const ExecutionOutcome run = execute_program(gold, vars);
  std::cout << serialize_program(gold) << " -> " << to_json(run).dump() << '\n';

  SolveConfig cfg;
  cfg.target = TargetMode::GoldAnswer;
  const SolveResult found = solve(vars, options, 1, cfg);
  std::cout << "solve: " << to_json(found, false).dump() << '\n';

  const std::vector<Program> beam = candidate_beam(vars, 2, 5);
  std::cout << "first executable candidates:\n";
  for (const auto& p : beam) std::cout << "  " << serialize_program(p) << '\n';
  return found.outcome.answered() ? 0 : 1;
}
