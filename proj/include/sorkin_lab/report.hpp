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

#include <span>
#include <string>

#include "json.hpp"

#include "sorkin_lab/detection.hpp"
#include "sorkin_lab/protocol.hpp"

namespace sorkin {

inline constexpr const char* kBatchesCsvSchema = "sorkin-lab.batches/1";
inline constexpr const char* kSensitivityCsvSchema = "sorkin-lab.sensitivity/1";

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

nlohmann::json report_to_json(const SorkinReport& report);
nlohmann::json estimate_to_json(const KappaEstimate& estimate);

/// Header `batch,p1,...,p7,I_ab,I_ac,I_bc,I2,I3,kappa` plus one row per batch.
std::string batches_csv(std::span<const SorkinReport> reports);

/// Header `epsilon,kappa_mean,kappa_std,detected,detection_fraction`.
std::string sensitivity_csv(const SensitivityTable& table);

}  // namespace sorkin
