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

// Stable JSON shapes shared by the CLI and scripting bindings.
//
//   ExecutionOutcome  {"status", "trace", "final"? , "error"?: {"step", "reason"}}
//   BeamOutcome       {"status", "chosen_option"?, "chosen_program"?, "chosen_rank"?,
//                      "attempts": [{"rank", "failure"}]}
//   SolveResult       {"outcome", "programs_tried", "depth_reached", "elapsed_ms"?}

#pragma once

#include <nlohmann/json.hpp>

#include "geoprog/executor.hpp"
#include "geoprog/program.hpp"
#include "geoprog/synthesizer.hpp"

namespace geoprog {

inline nlohmann::json to_json(const ParseError& e) {
  return {{"kind", to_string(e.kind())}, {"step", e.step()}, {"offset", e.offset()}, {"message", e.what()}};
}

inline nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json issues = nlohmann::json::array();
  for (const auto& i : r.issues) issues.push_back({{"step", i.step}, {"kind", to_string(i.kind)}, {"message", i.message}});
  return {{"ok", r.ok()}, {"issues", std::move(issues)}};
}

inline nlohmann::json to_json(const ExecutionOutcome& o) {
  nlohmann::json j{{"status", to_string(o.status)}, {"trace", o.trace}};
  if (o.final_value) j["final"] = *o.final_value;
  if (o.error) j["error"] = {{"step", o.error->step}, {"reason", o.error->reason}};
  return j;
}

inline nlohmann::json to_json(const BeamOutcome& o) {
  nlohmann::json j{{"status", to_string(o.status)}};
  if (o.chosen_option) j["chosen_option"] = *o.chosen_option;
  if (o.chosen_program) j["chosen_program"] = serialize_program(*o.chosen_program);
  if (o.chosen_rank) j["chosen_rank"] = *o.chosen_rank;
  nlohmann::json attempts = nlohmann::json::array();
  for (const auto& a : o.attempts) attempts.push_back({{"rank", a.rank}, {"failure", to_string(a.failure)}});
  j["attempts"] = std::move(attempts);
  return j;
}

// Wall-clock time is the only nondeterministic field; callers that need
// byte-stable output leave it out.
inline nlohmann::json to_json(const SolveResult& r, bool include_elapsed = true) {
  nlohmann::json j{{"outcome", to_json(r.outcome)}, {"programs_tried", r.programs_tried}, {"depth_reached", r.depth_reached}};
  if (include_elapsed) j["elapsed_ms"] = r.elapsed.count();
  return j;
}

}  // namespace geoprog
