// Copyright 2026 The sorkin-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sorkin_lab/config.hpp"

namespace sorkin {

enum ExitCode : int {
  kExitOk = 0,
  /// `simulate` under Born rejected the no-third-order null at 5 sigma.
  kExitNullRejected = 1,
  kExitMissingConfig = 2,
  kExitError = 3,
};

struct CommandContext {
  /// Report files go here; `simulate` and `sensitivity` default to ".".
  std::optional<std::filesystem::path> out_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  unsigned threads = 0;
};

/// Exact seven-probability report; independent of detection settings.
int cmd_ideal(const ExperimentConfig& config, const CommandContext& ctx);
/// M simulated batches -> batches.csv + summary.json.
int cmd_simulate(const ExperimentConfig& config, const CommandContext& ctx);
/// Per-pulse RWA fidelities of the solved preparation schedules.
int cmd_rwa_check(const ExperimentConfig& config, const CommandContext& ctx);
/// Solved seven-schedule table with durations at omega1.
int cmd_schedule(const ExperimentConfig& config, const CommandContext& ctx);
/// Epsilon scan -> sensitivity.csv + sensitivity.json.
int cmd_sensitivity(const ExperimentConfig& config, std::span<const double> eps_grid,
                    const CommandContext& ctx);

/// Full command line (argv[0] excluded). Maps errors onto the exit-code
/// contract: 2 missing config, 3 schema or typed errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sorkin
