// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tierguard/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "tierguard/report.hpp"
#include "tierguard/scenario_io.hpp"
#include "tierguard/sim.hpp"

namespace tierguard::cli {

namespace fs = std::filesystem;

namespace {

void print(std::ostream& os, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) os << d.to_string() << '\n';
}

bool write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << contents;
  out.flush();
  return static_cast<bool>(out);
}

struct RunFlags {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "tierguard-out";
  std::string format = "json";
  std::string mode = "sequential";
};

int do_validate(const std::string& file, bool lenient, std::ostream& out, std::ostream& err) {
  if (!read_file(file)) {
    err << "error: cannot read " << file << '\n';
    return kExitIo;
  }
  auto diags = validate_file(file, lenient);
  print(has_errors(diags) ? err : out, diags);
  if (has_errors(diags)) return kExitInvalid;
  out << file << ": ok\n";
  return kExitOk;
}

int do_run(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  auto text = read_file(flags.file);
  if (!text) {
    err << "error: cannot read " << flags.file << '\n';
    return kExitIo;
  }
  ParseResult parsed = parse_scenario(*text);
  if (!parsed.scenario) {
    print(err, parsed.diagnostics);
    return kExitInvalid;
  }
  Scenario scenario = std::move(*parsed.scenario);
  if (flags.seed) scenario.seed = *flags.seed;
  auto diags = validate_scenario(scenario);
  if (has_errors(diags)) {
    print(err, diags);
    return kExitInvalid;
  }
  print(err, diags);

  SimulationOptions options;
  options.mode = flags.mode == "parallel" ? ExecutionMode::parallel : ExecutionMode::sequential;
  options.record_events = false;
  SimulationResult result;
  try {
    result = run(scenario, options);
  } catch (const ScenarioError& e) {
    print(err, e.diagnostics());
    return kExitInvalid;
  }

  fs::path dir(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create output directory " << dir.string() << '\n';
    return kExitIo;
  }
  const bool csv = flags.format == "csv";
  std::string metrics = csv ? metrics_to_csv(result.metrics) : metrics_to_json(result.metrics).dump(2) + "\n";
  auto report = build_report(scenario, result);
  const std::pair<fs::path, std::string> files[] = {
      {dir / (csv ? "metrics.csv" : "metrics.json"), std::move(metrics)},
      {dir / "traces.json", traces_to_json(result)},
      {dir / "report.json", report.dump(2) + "\n"},
  };
  for (const auto& [path, contents] : files) {
    if (!write_file(path, contents)) {
      err << "error: cannot write " << path.string() << '\n';
      return kExitIo;
    }
  }
  out << format_report(report);
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

int do_report(const std::string& run_dir, std::ostream& out, std::ostream& err) {
  fs::path path = fs::path(run_dir) / "report.json";
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read " << path.string() << '\n';
    return kExitIo;
  }
  try {
    out << format_report(nlohmann::json::parse(*text));
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << path.string() << " is not a report: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-tenant layered inspection simulator", "tierguard"};
  app.require_subcommand(1);

  std::string validate_file_arg;
  bool lenient = false;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("file", validate_file_arg, "Scenario file")->required();
  validate->add_flag("--lenient", lenient, "Warn on unknown keys instead of failing");

  RunFlags flags;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write metrics, traces and report");
  run_cmd->add_option("file", flags.file, "Scenario file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", flags.out_dir, "Output directory");
  run_cmd->add_option("--format", flags.format, "Metrics format")
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--mode", flags.mode, "Session evaluation mode")
      ->check(CLI::IsMember({"sequential", "parallel"}));

  std::string run_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize a previous run");
  report_cmd->add_option("run-dir", run_dir, "Directory written by run")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*validate) return do_validate(validate_file_arg, lenient, out, err);
  if (*run_cmd) {
    if (*seed_opt) flags.seed = seed;
    return do_run(flags, out, err);
  }
  return do_report(run_dir, out, err);
}

}  // namespace tierguard::cli
