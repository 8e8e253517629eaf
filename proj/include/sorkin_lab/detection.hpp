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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sorkin_lab/born_models.hpp"
#include "sorkin_lab/protocol.hpp"
#include "sorkin_lab/random.hpp"

namespace sorkin {

/// How signal counts are normalized.
enum class ReferenceMode {
  /// One bright-reference count per batch, shared by the seven experiments.
  SharedPerBatch,
  /// An independent bright reference for every probability estimate.
  PerEstimate,
};

const char* to_string(ReferenceMode mode);

/// Photon-rate readout model. Means are photons per shot per readout window
/// (400 kcps x 300 ns = 0.12 bright, 5 kcps x 300 ns = 0.0015 background).
struct DetectionParams {
  double mu_bright = 0.12;
  double contrast = 0.30;
  double mu_background = 0.0015;
  std::uint64_t shots = 2'000'000;
  double readout_window_s = 300e-9;
  ReferenceMode reference = ReferenceMode::SharedPerBatch;

  double mu_dark() const { return mu_bright * (1.0 - contrast); }
  /// Throws ArgumentError.
  void validate() const;
};

/// `std::nullopt` means exact readout (true probabilities, no noise).
using Readout = std::optional<DetectionParams>;

/// Total signal photons of N shots: bright shots B ~ Binomial(N, p), then
/// S ~ Poisson(B mu_bright + (N - B) mu_dark + N mu_bg).
std::uint64_t sample_signal_counts(double p_true, const DetectionParams& det, Engine& engine);
/// R ~ Poisson(N (mu_bright + mu_bg)), redrawn while zero.
std::uint64_t sample_reference_counts(const DetectionParams& det, Engine& engine);

/// S / R with an independent reference. In expectation an affine map of p_true.
/// Throws ArgumentError unless p_true is in [0, 1].
double simulate_probability_estimate(double p_true, const DetectionParams& det, std::uint64_t seed);

/// The seven probabilities under `rule`, in experiment order.
ProbabilityVector true_probabilities(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                     const ProbabilityRule& rule);

/// One pass of the seven-experiment protocol followed by the analysis chain.
/// Experiment i of a batch draws from derive_seed(seed, {i}); the shared
/// reference draws from derive_seed(seed, {7}).
SorkinReport run_protocol_batch(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                const ProbabilityRule& rule, const Readout& readout,
                                std::uint64_t seed);

/// Seed of batch `index` under `master_seed`.
std::uint64_t batch_seed(std::uint64_t master_seed, std::uint64_t index);

/// Worker count from SORKIN_LAB_THREADS (unset or invalid: hardware concurrency).
unsigned default_thread_count();

/// M independent batches; result order and content do not depend on `threads`.
std::vector<SorkinReport> run_batches(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                      const ProbabilityRule& rule, const Readout& readout,
                                      std::size_t batches, std::uint64_t master_seed,
                                      unsigned threads = 0);

inline constexpr std::size_t kDefaultBootstrapResamples = 10'000;

struct KappaEstimate {
  std::vector<double> per_batch_kappa;
  double mean = 0.0;
  double std_dev = 0.0;    // sample standard deviation
  double std_error = 0.0;  // std_dev / sqrt(M)
  std::pair<double, double> ci95{0.0, 0.0};
};

/// Mean, sample std, standard error and a percentile-bootstrap 95% interval.
/// Throws InsufficientBatchesError for fewer than two batches.
KappaEstimate estimate_kappa(std::span<const SorkinReport> batches,
                             std::uint64_t bootstrap_seed = 0,
                             std::size_t resamples = kDefaultBootstrapResamples);

enum class RuleFamily { ExponentDeformed, AdditiveTriple };

ProbabilityRule make_rule(RuleFamily family, double epsilon);

struct SensitivityRow {
  double epsilon = 0.0;
  double kappa_mean = 0.0;  // averaged over trials
  double kappa_std = 0.0;   // per-trial sample std, averaged over trials
  bool detected = false;    // detection_fraction >= 0.5
  double detection_fraction = 0.0;
};

struct SensitivityTable {
  std::vector<SensitivityRow> rows;
  /// First grid epsilon (in grid order) whose row is detected.
  std::optional<double> smallest_detected;
  /// Linear interpolation of the 50% crossing of detection_fraction.
  std::optional<double> threshold_crossing;
};

/// For each epsilon runs `trials` independent sets of M batches. A set
/// detects when |kappa_mean| > 3 kappa_std / sqrt(M). Exact readout gives
/// kappa_std = 0, so any nonzero kappa counts as detected.
SensitivityTable sensitivity_scan(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                  RuleFamily family, std::span<const double> eps_grid,
                                  const Readout& readout, std::size_t batches,
                                  std::uint64_t master_seed, std::size_t trials = 1,
                                  unsigned threads = 0);

struct ScalingRow {
  std::uint64_t shots = 0;
  double kappa_std = 0.0;
};

/// Empirical kappa spread under Born for each shot count. Throws
/// ArgumentError unless `shot_list` is ascending.
std::vector<ScalingRow> scaling_check(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                      const Readout& readout,
                                      std::span<const std::uint64_t> shot_list,
                                      std::size_t batches, std::uint64_t master_seed,
                                      unsigned threads = 0);

}  // namespace sorkin
