// Copyright 2026 The Tierguard Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tierguard::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

/// Entry point behind the `tierguard` binary. `args` excludes the program
/// name. Verbs: validate, run, report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tierguard::cli
