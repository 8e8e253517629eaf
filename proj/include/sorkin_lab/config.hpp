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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sorkin_lab/born_models.hpp"
#include "sorkin_lab/detection.hpp"
#include "sorkin_lab/dynamics.hpp"
#include "sorkin_lab/errors.hpp"
#include "sorkin_lab/protocol.hpp"

namespace sorkin {

/// The config path does not exist or cannot be read (CLI exit 2).
class ConfigFileError : public Error {
 public:
  using Error::Error;
};

struct SensitivitySettings {
  RuleFamily family = RuleFamily::AdditiveTriple;
  std::vector<double> eps_grid{0.0, 0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
  std::size_t trials = 1;
};

/// Fully resolved run configuration. Every field has the reference default.
struct ExperimentConfig {
  HamiltonianParams hamiltonian;
  TargetAmplitudes amplitudes = TargetAmplitudes::reference();
  MeasurementSpec measurement = MeasurementSpec::m1();
  /// "M1", "M2" or "custom".
  std::string measurement_label = "M1";
  ProbabilityRule rule;
  Readout detection = DetectionParams{};
  std::size_t batches = 50;
  std::uint64_t master_seed = 1;
  IntegratorOptions integrator;
  double kappa_floor = kDefaultKappaFloor;
  SensitivitySettings sensitivity;
  int dephasing_shots = 2000;
};

/// Parses the `key = value` format documented in docs/file_formats.md.
/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config_text(std::string_view text);

/// Throws ConfigFileError when the file is missing or unreadable.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Parses a number, accepting multiples of pi such as `pi/2`, `3pi/2` or
/// `-0.5*pi`. Throws ArgumentError.
double parse_real(std::string_view text);

/// Comma-separated list of parse_real values.
std::vector<double> parse_real_list(std::string_view text);

MeasurementSpec parse_measurement(std::string_view text, std::string* label = nullptr);

nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace sorkin
