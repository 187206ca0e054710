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

// Command-line front end. Exit codes: 0 success, 1 domain-level failure
// (unparseable program, failed strict verification, unreadable data),
// 2 usage error.

#pragma once

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geoprog/geoprog.hpp"

namespace geoprog::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Comma-separated decimals, parsed without locale.
inline std::vector<double> parse_number_list(std::string_view text, std::string_view flag) {
  std::vector<double> out;
  if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw UsageError(std::string(flag) + ": '" + std::string(item) + "' is not a number");
    }
    out.push_back(v);
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view flag) {
  std::vector<std::size_t> out;
  for (double v : parse_number_list(text, flag)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError(std::string(flag) + ": beam sizes must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

struct CliConfig {
  std::string program;
  std::string vars;
  std::string options;
  std::optional<std::size_t> answer;
  std::size_t max_steps = SolveConfig{}.max_steps;
  std::string beam;
  double abs_tol = MatchPolicy{}.abs_tol;
  double rel_tol = MatchPolicy{}.rel_tol;
  std::uint64_t budget = SolveConfig{}.max_candidates;
  bool strict = false;
  bool json = false;
  std::string out;
  std::string input;
  std::string candidates;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"geoprog: geometry problem program language tools", "geoprog"};
    app.require_subcommand(1, 1);
    CliConfig cfg;

    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", cfg.json, "Print a single JSON document"); };
    auto add_policy = [&](CLI::App* sub) {
      sub->add_option("--abs-tol", cfg.abs_tol, "Absolute option-matching tolerance")->check(CLI::NonNegativeNumber);
      sub->add_option("--rel-tol", cfg.rel_tol, "Relative option-matching tolerance")->check(CLI::NonNegativeNumber);
    };

    auto* parse = app.add_subcommand("parse", "Parse a program and print its canonical form");
    parse->add_option("--program,program", cfg.program, "Program text")->required();
    add_json(parse);

    auto* exec = app.add_subcommand("exec", "Execute a program over problem variables");
    exec->add_option("--program", cfg.program, "Program text")->required();
    exec->add_option("--vars", cfg.vars, "Comma-separated problem variables");
    add_json(exec);

    auto* solve_cmd = app.add_subcommand("solve", "Search for a program that answers a problem");
    solve_cmd->add_option("--vars", cfg.vars, "Comma-separated problem variables");
    solve_cmd->add_option("--options", cfg.options, "The four comma-separated options")->required();
    solve_cmd->add_option("--answer", cfg.answer, "Gold option index; restricts the search to that option")
        ->check(CLI::Range(0, 3));
    solve_cmd->add_option("--max-steps", cfg.max_steps, "Maximum program steps (1..4)")->check(CLI::Range(1, 4));
    solve_cmd->add_option("--beam", cfg.beam, "Number of failed attempts to report");
    solve_cmd->add_option("--budget", cfg.budget, "Maximum programs to try")->check(CLI::PositiveNumber);
    add_policy(solve_cmd);
    add_json(solve_cmd);

    auto* verify = app.add_subcommand("verify", "Check gold programs against gold answers");
    verify->add_option("input", cfg.input, "Problem file")->required();
    verify->add_flag("--strict", cfg.strict, "Strict loading; missing programs and any failure exit 1");
    add_policy(verify);
    add_json(verify);

    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    stats->add_option("input", cfg.input, "Problem file")->required();
    stats->add_flag("--strict", cfg.strict, "Reject files with any record error");
    add_json(stats);

    auto* eval = app.add_subcommand("eval", "Accuracy and no-result rate per beam size");
    eval->add_option("input", cfg.input, "Problem file")->required();
    eval->add_option("--candidates", cfg.candidates, "Candidate file (id -> [program]); default: synthesizer");
    eval->add_option("--beam", cfg.beam, "Comma-separated ascending beam sizes (default 1,10,100)");
    eval->add_option("--max-steps", cfg.max_steps, "Synthesizer maximum program steps")->check(CLI::Range(1, 4));
    eval->add_option("--out", cfg.out, "Write the JSON report here and the table next to it");
    eval->add_flag("--strict", cfg.strict, "Reject problem files with any record error");
    add_policy(eval);
    add_json(eval);

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n\n" << app.help();
      return kExitUsage;
    }

    try {
      policy_ = MatchPolicy{cfg.abs_tol, cfg.rel_tol};
      if (*parse) return run_parse(cfg);
      if (*exec) return run_exec(cfg);
      if (*solve_cmd) return run_solve(cfg);
      if (*verify) return run_verify(cfg);
      if (*stats) return run_stats(cfg);
      if (*eval) return run_eval(cfg);
    } catch (const UsageError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const DatasetError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitFailure;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitFailure;
    }
    return kExitUsage;
  }

 private:
  void emit(const nlohmann::json& j, bool compact) { out_ << (compact ? j.dump() : j.dump(2)) << '\n'; }

  int run_parse(const CliConfig& cfg) {
    const Candidate c = try_parse_program(cfg.program);
    if (const auto* e = std::get_if<ParseError>(&c)) {
      if (cfg.json) {
        emit({{"error", to_json(*e)}}, true);
      } else {
        err_ << "parse error: " << e->what() << '\n';
      }
      return kExitFailure;
    }
    const Program& p = std::get<Program>(c);
    if (cfg.json) {
      emit({{"program", serialize_program(p)}, {"steps", operation_count(p)}, {"length", program_length(p)}}, true);
    } else {
      out_ << serialize_program(p) << '\n';
    }
    return kExitOk;
  }

  int run_exec(const CliConfig& cfg) {
    const auto vars = parse_number_list(cfg.vars, "--vars");
    const Candidate c = try_parse_program(cfg.program);
    if (const auto* e = std::get_if<ParseError>(&c)) {
      if (cfg.json) {
        emit({{"status", "ParseError"}, {"error", to_json(*e)}}, true);
      } else {
        err_ << "parse error: " << e->what() << '\n';
      }
      return kExitFailure;
    }
    emit(to_json(execute_program(std::get<Program>(c), vars)), cfg.json);
    return kExitOk;
  }

  int run_solve(const CliConfig& cfg) {
    const auto vars = parse_number_list(cfg.vars, "--vars");
    const auto options = parse_number_list(cfg.options, "--options");
    if (options.size() != kNumOptions) throw UsageError("--options: exactly 4 options are required");
    SolveConfig sc;
    sc.max_steps = cfg.max_steps;
    sc.max_candidates = cfg.budget;
    sc.policy = policy_;
    if (!cfg.beam.empty()) {
      const auto beam = parse_count_list(cfg.beam, "--beam");
      if (beam.size() != 1) throw UsageError("--beam: solve takes a single beam size");
      sc.beam_size = beam.front();
    }
    if (cfg.answer) sc.target = TargetMode::GoldAnswer;
    const SolveResult r = solve(vars, options, cfg.answer, sc);
    // Timing goes to stderr so identical invocations print identical JSON.
    err_ << "elapsed_ms: " << r.elapsed.count() << '\n';
    emit(to_json(r, false), cfg.json);
    return kExitOk;
  }

  LoadResult load(const CliConfig& cfg) {
    LoadResult loaded = load_problems(cfg.input, cfg.strict ? LoadMode::Strict : LoadMode::Lenient);
    for (const auto& issue : loaded.issues) err_ << "warning: " << issue.describe() << '\n';
    return loaded;
  }

  int run_verify(const CliConfig& cfg) {
    const LoadResult loaded = load(cfg);
    const AnnotationReport report = verify_annotations(loaded.problems, policy_, cfg.strict);
    emit(to_json(report), cfg.json);
    return cfg.strict && !report.ok() ? kExitFailure : kExitOk;
  }

  int run_stats(const CliConfig& cfg) {
    const LoadResult loaded = load(cfg);
    emit(to_json(dataset_stats(loaded.problems)), cfg.json);
    return kExitOk;
  }

  int run_eval(const CliConfig& cfg) {
    const std::vector<std::size_t> beams =
        cfg.beam.empty() ? std::vector<std::size_t>{1, 10, 100} : parse_count_list(cfg.beam, "--beam");
    if (beams.empty() || !std::is_sorted(beams.begin(), beams.end())) {
      throw UsageError("--beam: beam sizes must be ascending");
    }
    const LoadResult loaded = load(cfg);

    std::unique_ptr<CandidateGenerator> gen;
    if (cfg.candidates.empty()) {
      SolveConfig sc;
      sc.max_steps = cfg.max_steps;
      gen = std::make_unique<SynthesizerGenerator>(sc);
    } else {
      gen = std::make_unique<ExternalFileGenerator>(ExternalFileGenerator::from_file(cfg.candidates));
    }
    const Metrics m = evaluate(*gen, loaded.problems, beams, policy_,
                               [this](const std::string& w) { err_ << "warning: " << w << '\n'; });
    if (!cfg.out.empty()) {
      const ReportPaths paths = export_report(m, cfg.out);
      err_ << "wrote " << paths.json.string() << " and " << paths.table.string() << '\n';
    }
    if (cfg.json) {
      emit(to_json(m), true);
    } else {
      out_ << "generator: " << m.generator << '\n' << format_table(m);
    }
    return kExitOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  MatchPolicy policy_{};
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace geoprog::cli
