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

// Problem files, corpus statistics and gold-annotation checks.
//
// A problem file is either a JSON array of problem objects or one object per
// line. Each object:
//
//   {"id": str, "text": str, "diagram": str|null, "vars": [num],
//    "options": [num x4], "answer": int, "program": str|null,
//    "type": "angle"|"length"|"other", "knowledge": [str],
//    "explanation": str|null, "split": "train"|"val"|"test"}
//
// Fields outside this schema are kept verbatim in Problem::extra.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoprog/executor.hpp"
#include "geoprog/parallel.hpp"
#include "geoprog/problem.hpp"
#include "geoprog/program.hpp"

namespace geoprog {

enum class LoadMode : std::uint8_t { Lenient, Strict };

struct LoadIssue {
  std::size_t record = 0;  // position in the file
  std::string id;          // empty when the record has no usable id
  std::string field;
  std::string message;

  std::string describe() const {
    return "record " + std::to_string(record) + (id.empty() ? "" : " (id " + id + ")") + ", field '" + field +
           "': " + message;
  }
};

class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(std::vector<LoadIssue> issues)
      : std::runtime_error(summary(issues)), issues_(std::move(issues)) {}
  explicit DatasetError(const std::string& what) : std::runtime_error(what) {}

  const std::vector<LoadIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string summary(const std::vector<LoadIssue>& issues) {
    std::string s = std::to_string(issues.size()) + " problem record error(s)";
    for (const auto& i : issues) s += "\n  " + i.describe();
    return s;
  }

  std::vector<LoadIssue> issues_;
};

struct LoadResult {
  std::vector<Problem> problems;
  std::vector<LoadIssue> issues;  // lenient mode only; strict mode throws
};

namespace detail {

inline const std::array<std::string_view, 11> kProblemFields{"id",      "text", "diagram",   "vars",
                                                            "options", "answer", "program", "type",
                                                            "knowledge", "explanation", "split"};

class RecordReader {
 public:
  RecordReader(const nlohmann::json& j, std::size_t record, std::vector<LoadIssue>& issues)
      : j_(j), record_(record), issues_(issues) {}

  void fail(std::string field, std::string message) {
    issues_.push_back({record_, id_, std::move(field), std::move(message)});
    ok_ = false;
  }

  bool ok() const noexcept { return ok_; }

  std::optional<Problem> read() {
    if (!j_.is_object()) {
      fail("", "record is not a JSON object");
      return std::nullopt;
    }
    Problem p;
    if (auto id = required_string("id")) {
      p.id = *id;
      id_ = p.id;
    }
    if (auto text = required_string("text")) p.text = *text;
    p.diagram_path = optional_string("diagram");
    p.explanation = optional_string("explanation");

    if (const auto* vars = field("vars")) {
      if (!vars->is_array()) {
        fail("vars", "expected an array of numbers");
      } else {
        for (const auto& v : *vars) {
          if (!v.is_number()) {
            fail("vars", "expected an array of numbers");
            break;
          }
          p.problem_vars.push_back(v.get<double>());
        }
      }
    } else {
      fail("vars", "missing");
    }

    if (const auto* options = field("options")) {
      if (!options->is_array() || options->size() != kNumOptions) {
        fail("options", "expected exactly 4 numbers");
      } else {
        for (std::size_t i = 0; i < kNumOptions; ++i) {
          if (!(*options)[i].is_number()) {
            fail("options", "expected exactly 4 numbers");
            break;
          }
          p.options[i] = (*options)[i].get<double>();
        }
      }
    } else {
      fail("options", "missing");
    }

    if (const auto* answer = field("answer")) {
      if (!answer->is_number_integer() || answer->get<long long>() < 0 ||
          answer->get<long long>() >= static_cast<long long>(kNumOptions)) {
        fail("answer", "expected an integer in 0..3");
      } else {
        p.answer_index = answer->get<std::size_t>();
      }
    } else {
      fail("answer", "missing");
    }

    if (auto type = required_string("type")) {
      if (auto t = parse_problem_type(*type)) {
        p.problem_type = *t;
      } else {
        fail("type", "expected angle, length or other, got '" + *type + "'");
      }
    }
    if (auto split = required_string("split")) {
      if (auto s = parse_split(*split)) {
        p.split = *s;
      } else {
        fail("split", "expected train, val or test, got '" + *split + "'");
      }
    }

    if (const auto* tags = field("knowledge"); tags && !tags->is_null()) {
      if (!tags->is_array()) {
        fail("knowledge", "expected an array of strings");
      } else {
        for (const auto& t : *tags) {
          if (!t.is_string()) {
            fail("knowledge", "expected an array of strings");
            break;
          }
          p.knowledge_tags.push_back(t.get<std::string>());
        }
      }
    }

    for (const auto& [key, value] : j_.items()) {
      if (std::find(kProblemFields.begin(), kProblemFields.end(), key) == kProblemFields.end()) {
        p.extra[key] = value;
      }
    }

    if (!ok_) return std::nullopt;

    // Program last: a bad annotation keeps the record in lenient mode.
    if (auto program = optional_string("program")) {
      try {
        p.gold_program = parse_program(*program);
      } catch (const ParseError& e) {
        issues_.push_back({record_, id_, "program", e.what()});
      }
    }
    return p;
  }

 private:
  const nlohmann::json* field(std::string_view name) const {
    auto it = j_.find(name);
    return it == j_.end() ? nullptr : &*it;
  }

  std::optional<std::string> required_string(std::string_view name) {
    const auto* f = field(name);
    if (!f) {
      fail(std::string(name), "missing");
      return std::nullopt;
    }
    if (!f->is_string()) {
      fail(std::string(name), "expected a string");
      return std::nullopt;
    }
    return f->get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view name) {
    const auto* f = field(name);
    if (!f || f->is_null()) return std::nullopt;
    if (!f->is_string()) {
      fail(std::string(name), "expected a string or null");
      return std::nullopt;
    }
    return f->get<std::string>();
  }

  const nlohmann::json& j_;
  std::size_t record_;
  std::vector<LoadIssue>& issues_;
  std::string id_;
  bool ok_ = true;
};

}  // namespace detail

inline nlohmann::json to_json(const Problem& p) {
  nlohmann::json j = p.extra;
  j["id"] = p.id;
  j["text"] = p.text;
  j["diagram"] = p.diagram_path ? nlohmann::json(*p.diagram_path) : nlohmann::json(nullptr);
  j["vars"] = p.problem_vars;
  j["options"] = p.options;
  j["answer"] = p.answer_index;
  j["program"] = p.gold_program ? nlohmann::json(serialize_program(*p.gold_program)) : nlohmann::json(nullptr);
  j["type"] = to_string(p.problem_type);
  j["knowledge"] = p.knowledge_tags;
  j["explanation"] = p.explanation ? nlohmann::json(*p.explanation) : nlohmann::json(nullptr);
  j["split"] = to_string(p.split);
  return j;
}

// Parses problem records from text. Accepts a JSON array or one JSON object
// per line. Malformed JSON always throws DatasetError; record-level problems
// throw in strict mode and are collected in lenient mode, where records with
// schema errors are dropped and records with an unparseable program are kept
// without one.
inline LoadResult parse_problems(std::string_view text, LoadMode mode = LoadMode::Lenient) {
  std::vector<nlohmann::json> records;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw DatasetError("malformed JSON: problem file is not a valid JSON array");
    records.assign(doc.begin(), doc.end());
  } else if (nlohmann::json doc = nlohmann::json::parse(text, nullptr, false); doc.is_object()) {
    records.push_back(std::move(doc));
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      const std::string_view line = text.substr(pos, end - pos);
      ++line_no;
      pos = end + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
      if (doc.is_discarded()) throw DatasetError("malformed JSON on line " + std::to_string(line_no));
      records.push_back(std::move(doc));
    }
  }

  LoadResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    detail::RecordReader reader(records[i], i, result.issues);
    if (auto p = reader.read()) result.problems.push_back(std::move(*p));
  }
  if (mode == LoadMode::Strict && !result.issues.empty()) throw DatasetError(std::move(result.issues));
  return result;
}

inline LoadResult load_problems(const std::filesystem::path& path, LoadMode mode = LoadMode::Lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problems(buf.str(), mode);
}

// ---------------------------------------------------------------------------
// Statistics

struct Stats {
  std::size_t total = 0;
  std::array<std::size_t, 3> per_type{};   // indexed by ProblemType
  std::array<std::size_t, 3> per_split{};  // indexed by Split
  std::size_t with_program = 0;
  double avg_op = 0.0;  // mean step count over annotated problems
  double avg_pl = 0.0;  // mean token count over annotated problems
  double avg_knowledge_tags = 0.0;

  std::size_t count(ProblemType t) const noexcept { return per_type[static_cast<std::size_t>(t)]; }
  std::size_t count(Split s) const noexcept { return per_split[static_cast<std::size_t>(s)]; }
};

inline Stats dataset_stats(std::span<const Problem> problems) {
  Stats s;
  s.total = problems.size();
  std::size_t ops = 0, tokens = 0, tags = 0;
  for (const auto& p : problems) {
    ++s.per_type[static_cast<std::size_t>(p.problem_type)];
    ++s.per_split[static_cast<std::size_t>(p.split)];
    tags += p.knowledge_tags.size();
    if (p.gold_program) {
      ++s.with_program;
      ops += operation_count(*p.gold_program);
      tokens += program_length(*p.gold_program);
    }
  }
  if (s.with_program) {
    s.avg_op = static_cast<double>(ops) / static_cast<double>(s.with_program);
    s.avg_pl = static_cast<double>(tokens) / static_cast<double>(s.with_program);
  }
  if (s.total) s.avg_knowledge_tags = static_cast<double>(tags) / static_cast<double>(s.total);
  return s;
}

inline nlohmann::json to_json(const Stats& s) {
  nlohmann::json types, splits;
  for (auto t : kProblemTypes) types[std::string(to_string(t))] = s.count(t);
  for (auto v : kSplits) splits[std::string(to_string(v))] = s.count(v);
  return {{"total", s.total},
          {"per_type", types},
          {"per_split", splits},
          {"with_program", s.with_program},
          {"avg_op", s.avg_op},
          {"avg_pl", s.avg_pl},
          {"avg_knowledge_tags", s.avg_knowledge_tags}};
}

// ---------------------------------------------------------------------------
// Annotation verification

enum class AnnotationFailureKind : std::uint8_t { GrammarError, DomainError, ValueMismatch, MissingProgram };

inline constexpr std::string_view to_string(AnnotationFailureKind k) noexcept {
  switch (k) {
    case AnnotationFailureKind::GrammarError: return "GrammarError";
    case AnnotationFailureKind::DomainError: return "DomainError";
    case AnnotationFailureKind::ValueMismatch: return "ValueMismatch";
    case AnnotationFailureKind::MissingProgram: return "MissingProgram";
  }
  return "?";
}

struct AnnotationFailure {
  std::string id;
  AnnotationFailureKind reason = AnnotationFailureKind::ValueMismatch;
  std::string detail;
};

struct AnnotationReport {
  std::size_t total_checked = 0;
  std::size_t passed = 0;
  std::vector<AnnotationFailure> failures;

  bool ok() const noexcept { return failures.empty(); }
};

// A gold program passes when it executes to a value whose closest matching
// option is the gold answer. Problems without a program are skipped, or
// reported as MissingProgram when `strict`.
inline AnnotationReport verify_annotations(std::span<const Problem> problems, const MatchPolicy& policy = {},
                                           bool strict = false) {
  std::vector<std::optional<AnnotationFailure>> slots(problems.size());
  std::vector<char> checked(problems.size(), 0);
  parallel_for(problems.size(), [&](std::size_t i) {
    const Problem& p = problems[i];
    if (!p.gold_program) {
      if (strict) {
        checked[i] = 1;
        slots[i] = AnnotationFailure{p.id, AnnotationFailureKind::MissingProgram, "no gold program"};
      }
      return;
    }
    checked[i] = 1;
    const ExecutionOutcome exec = execute_program(*p.gold_program, p.problem_vars);
    if (exec.status == ExecStatus::GrammarError) {
      slots[i] = AnnotationFailure{p.id, AnnotationFailureKind::GrammarError, exec.error->reason};
    } else if (exec.status == ExecStatus::DomainError) {
      slots[i] = AnnotationFailure{p.id, AnnotationFailureKind::DomainError,
                                   "step " + std::to_string(exec.error->step) + ": " + exec.error->reason};
    } else {
      const auto option = match_option(*exec.final_value, p.options, policy);
      if (option != p.answer_index) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "value " << *exec.final_value << " matches "
            << (option ? "option " + std::to_string(*option) : std::string("no option")) << ", answer is option "
            << p.answer_index;
        slots[i] = AnnotationFailure{p.id, AnnotationFailureKind::ValueMismatch, msg.str()};
      }
    }
  });

  AnnotationReport report;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!checked[i]) continue;
    ++report.total_checked;
    if (slots[i]) {
      report.failures.push_back(std::move(*slots[i]));
    } else {
      ++report.passed;
    }
  }
  return report;
}

inline nlohmann::json to_json(const AnnotationReport& r) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures) failures.push_back({{"id", f.id}, {"reason", to_string(f.reason)}, {"detail", f.detail}});
  return {{"total_checked", r.total_checked}, {"passed", r.passed}, {"failures", std::move(failures)}};
}

}  // namespace geoprog
