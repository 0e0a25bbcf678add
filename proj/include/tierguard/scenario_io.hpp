// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tierguard/scenario.hpp"

namespace tierguard {

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a scenario document (JSON). Unknown keys are errors unless
/// `lenient`, in which case they are warnings. Syntax errors carry the line
/// and column of the failure. Never throws on malformed input.
ParseResult parse_scenario(std::string_view text, bool lenient = false);

/// Full, explicit form: every field written, keys sorted.
nlohmann::json scenario_to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

/// Reads, parses and validates. Unreadable files yield a single "io" error.
std::vector<Diagnostic> validate_file(const std::filesystem::path& path, bool lenient = false);

/// File read helper; nullopt when the file cannot be opened.
std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace tierguard
