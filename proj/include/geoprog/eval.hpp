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

// Evaluation harness: answer accuracy and no-result rate per beam size.
//
// A generator supplies a ranked candidate list per problem. Each beam size
// scores the prefix of that single list, so a larger beam can only turn a
// NoResult into an answer, never the other way round.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
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
#include "geoprog/synthesizer.hpp"

namespace geoprog {

inline constexpr int kReportVersion = 1;

class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual std::string name() const = 0;
  // Ranked candidates for a problem, at most `max_count` of them; nullopt
  // when the generator has nothing for this problem.
  virtual std::optional<std::vector<Candidate>> candidates(const Problem& problem, std::size_t max_count) const = 0;
};

// The brute-force synthesizer as a generator: the first programs of the
// enumeration stream that execute to a value.
class SynthesizerGenerator final : public CandidateGenerator {
 public:
  explicit SynthesizerGenerator(SolveConfig config = {}) : config_(config) { config_.check(); }

  std::string name() const override { return "synthesizer(max_steps=" + std::to_string(config_.max_steps) + ")"; }

  std::optional<std::vector<Candidate>> candidates(const Problem& problem, std::size_t max_count) const override {
    std::vector<Candidate> out;
    for (auto& p : candidate_beam(problem.problem_vars, config_.max_steps, max_count)) out.emplace_back(std::move(p));
    return out;
  }

 private:
  SolveConfig config_;
};

// Pre-generated candidates, e.g. decoded by an external model. The file is a
// JSON object mapping problem id to an ordered list of program strings.
// Strings that do not parse stay in the beam as grammar errors.
class ExternalFileGenerator final : public CandidateGenerator {
 public:
  explicit ExternalFileGenerator(std::map<std::string, std::vector<std::string>> beams, std::string name = "external")
      : beams_(std::move(beams)), name_(std::move(name)) {}

  static ExternalFileGenerator from_json(const nlohmann::json& j, std::string name = "external") {
    if (!j.is_object()) throw std::invalid_argument("candidate file must be a JSON object of id -> [program]");
    std::map<std::string, std::vector<std::string>> beams;
    for (const auto& [id, list] : j.items()) {
      if (!list.is_array()) throw std::invalid_argument("candidates for '" + id + "' must be an array");
      auto& beam = beams[id];
      for (const auto& s : list) {
        if (!s.is_string()) throw std::invalid_argument("candidates for '" + id + "' must be strings");
        beam.push_back(s.get<std::string>());
      }
    }
    return ExternalFileGenerator(std::move(beams), std::move(name));
  }

  static ExternalFileGenerator from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed JSON in " + path.string());
    return from_json(j, path.filename().string());
  }

  std::string name() const override { return name_; }

  std::optional<std::vector<Candidate>> candidates(const Problem& problem, std::size_t max_count) const override {
    const auto it = beams_.find(problem.id);
    if (it == beams_.end()) return std::nullopt;
    std::vector<Candidate> out;
    const std::size_t n = std::min(max_count, it->second.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(try_parse_program(it->second[i]));
    return out;
  }

 private:
  std::map<std::string, std::vector<std::string>> beams_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Metrics

enum class Slice : std::uint8_t { Total, Angle, Length, Other };
inline constexpr std::array<Slice, 4> kSlices{Slice::Total, Slice::Angle, Slice::Length, Slice::Other};

inline constexpr std::string_view to_string(Slice s) noexcept {
  switch (s) {
    case Slice::Total: return "total";
    case Slice::Angle: return "angle";
    case Slice::Length: return "length";
    case Slice::Other: return "other";
  }
  return "?";
}

inline constexpr Slice slice_of(ProblemType t) noexcept { return static_cast<Slice>(static_cast<int>(t) + 1); }

// Outcome counts for one (beam size, slice) cell. An empty cell has no
// answers, so it reports no_result = 1.
struct Cell {
  std::size_t count = 0;
  std::size_t correct = 0;
  std::size_t no_result = 0;
  std::size_t wrong = 0;

  double accuracy() const noexcept { return count ? static_cast<double>(correct) / static_cast<double>(count) : 0.0; }
  double no_result_rate() const noexcept {
    return count ? static_cast<double>(no_result) / static_cast<double>(count) : 1.0;
  }
  double wrong_rate() const noexcept { return count ? static_cast<double>(wrong) / static_cast<double>(count) : 0.0; }

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct BeamMetrics {
  std::size_t beam_size = 0;
  std::array<Cell, 4> cells{};  // indexed by Slice

  const Cell& operator[](Slice s) const noexcept { return cells[static_cast<std::size_t>(s)]; }
  Cell& operator[](Slice s) noexcept { return cells[static_cast<std::size_t>(s)]; }

  friend bool operator==(const BeamMetrics&, const BeamMetrics&) = default;
};

struct Metrics {
  std::string generator;
  std::vector<BeamMetrics> rows;  // one per beam size, ascending

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

enum class Verdict : std::uint8_t { Correct, Wrong, NoResult };

inline Verdict classify(const BeamOutcome& o, std::size_t answer_index) noexcept {
  if (!o.answered()) return Verdict::NoResult;
  return o.chosen_option == answer_index ? Verdict::Correct : Verdict::Wrong;
}

using WarningSink = std::function<void(const std::string&)>;

inline Metrics evaluate(const CandidateGenerator& gen, std::span<const Problem> problems,
                        std::span<const std::size_t> beam_sizes, const MatchPolicy& policy = {},
                        const WarningSink& warn = {}) {
  if (beam_sizes.empty()) throw std::invalid_argument("at least one beam size is required");
  if (!std::is_sorted(beam_sizes.begin(), beam_sizes.end()) || beam_sizes.front() == 0) {
    throw std::invalid_argument("beam sizes must be positive and ascending");
  }
  const std::size_t widest = beam_sizes.back();

  // verdicts[i * beams + b]
  std::vector<Verdict> verdicts(problems.size() * beam_sizes.size(), Verdict::NoResult);
  std::vector<char> missing(problems.size(), 0);
  parallel_for(problems.size(), [&](std::size_t i) {
    const Problem& p = problems[i];
    const auto beam = gen.candidates(p, widest);
    if (!beam) {
      missing[i] = 1;
      return;
    }
    for (std::size_t b = 0; b < beam_sizes.size(); ++b) {
      const std::size_t n = std::min(beam_sizes[b], beam->size());
      const BeamOutcome o = execute_beam(std::span<const Candidate>(beam->data(), n), p.problem_vars, p.options, policy);
      verdicts[i * beam_sizes.size() + b] = classify(o, p.answer_index);
    }
  });

  Metrics m;
  m.generator = gen.name();
  for (std::size_t b = 0; b < beam_sizes.size(); ++b) {
    BeamMetrics row;
    row.beam_size = beam_sizes[b];
    for (std::size_t i = 0; i < problems.size(); ++i) {
      const Verdict v = verdicts[i * beam_sizes.size() + b];
      for (Slice s : {Slice::Total, slice_of(problems[i].problem_type)}) {
        Cell& c = row[s];
        ++c.count;
        if (v == Verdict::Correct) ++c.correct;
        if (v == Verdict::Wrong) ++c.wrong;
        if (v == Verdict::NoResult) ++c.no_result;
      }
    }
    m.rows.push_back(row);
  }
  if (warn) {
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (missing[i]) warn("no candidates for problem '" + problems[i].id + "', scored as no result");
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json to_json(const Metrics& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : m.rows) {
    nlohmann::json row{{"beam_size", r.beam_size}};
    for (Slice s : kSlices) {
      const Cell& c = r[s];
      row[std::string(to_string(s))] = {{"count", c.count},
                                        {"correct", c.correct},
                                        {"no_result", c.no_result},
                                        {"wrong", c.wrong},
                                        {"accuracy", c.accuracy()},
                                        {"no_result_rate", c.no_result_rate()},
                                        {"wrong_rate", c.wrong_rate()}};
    }
    rows.push_back(std::move(row));
  }
  return {{"schema", "geoprog.metrics"}, {"version", kReportVersion}, {"generator", m.generator}, {"rows", std::move(rows)}};
}

// Inverse of to_json; the stored fractions are derived and ignored.
inline Metrics metrics_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "geoprog.metrics") throw std::invalid_argument("not a geoprog metrics report");
  if (j.value("version", 0) != kReportVersion) throw std::invalid_argument("unsupported metrics report version");
  Metrics m;
  m.generator = j.at("generator").get<std::string>();
  for (const auto& row : j.at("rows")) {
    BeamMetrics r;
    r.beam_size = row.at("beam_size").get<std::size_t>();
    for (Slice s : kSlices) {
      const auto& c = row.at(std::string(to_string(s)));
      r[s] = Cell{c.at("count").get<std::size_t>(), c.at("correct").get<std::size_t>(),
                  c.at("no_result").get<std::size_t>(), c.at("wrong").get<std::size_t>()};
    }
    m.rows.push_back(r);
  }
  return m;
}

// Fixed-width ASCII table: beam size, problem count, accuracy, no-result and
// wrong percentages, then accuracy per problem type.
inline std::string format_table(const Metrics& m) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%6s | %7s | %7s | %7s | %8s | %8s | %9s | %8s\n", "BS", "N", "Acc(%)", "NR(%)",
                "Wrong(%)", "Angle(%)", "Length(%)", "Other(%)");
  out += line;
  out += "-------+---------+---------+---------+----------+----------+-----------+---------\n";
  for (const auto& r : m.rows) {
    const Cell& t = r[Slice::Total];
    std::snprintf(line, sizeof line, "%6zu | %7zu | %7.2f | %7.2f | %8.2f | %8.2f | %9.2f | %8.2f\n", r.beam_size,
                  t.count, 100.0 * t.accuracy(), 100.0 * t.no_result_rate(), 100.0 * t.wrong_rate(),
                  100.0 * r[Slice::Angle].accuracy(), 100.0 * r[Slice::Length].accuracy(),
                  100.0 * r[Slice::Other].accuracy());
    out += line;
  }
  return out;
}

struct ReportPaths {
  std::filesystem::path json;
  std::filesystem::path table;
};

// Writes the JSON report to `path` and the table next to it with a .txt
// extension.
inline ReportPaths export_report(const Metrics& m, const std::filesystem::path& path) {
  ReportPaths paths{path, path};
  paths.table.replace_extension(path.extension() == ".txt" ? ".table.txt" : ".txt");
  {
    std::ofstream out(paths.json, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + paths.json.string());
    out << to_json(m).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + paths.json.string());
  }
  {
    std::ofstream out(paths.table, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + paths.table.string());
    out << "generator: " << m.generator << '\n' << format_table(m);
    if (!out) throw std::runtime_error("write failed: " + paths.table.string());
  }
  return paths;
}

}  // namespace geoprog
