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

#include "sorkin_lab/detection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "sorkin_lab/errors.hpp"

namespace sorkin {

namespace {

std::uint64_t poisson(double mean, Engine& engine) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine);
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "true probability " << p << " outside [0, 1]";
    throw ArgumentError(msg.str());
  }
}

double sample_std(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// thrown by any task is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

const char* to_string(ReferenceMode mode) {
  return mode == ReferenceMode::SharedPerBatch ? "shared" : "independent";
}

void DetectionParams::validate() const {
  if (!(mu_bright > 0.0) || !std::isfinite(mu_bright)) {
    throw ArgumentError("detection.mu_bright must be > 0");
  }
  if (!(contrast > 0.0 && contrast <= 1.0)) {
    throw ArgumentError("detection.contrast must lie in (0, 1]");
  }
  if (!(mu_background >= 0.0) || !std::isfinite(mu_background)) {
    throw ArgumentError("detection.mu_bg must be >= 0");
  }
  if (shots < 1) throw ArgumentError("detection.shots must be >= 1");
}

std::uint64_t sample_signal_counts(double p_true, const DetectionParams& det, Engine& engine) {
  check_probability(p_true);
  std::binomial_distribution<std::uint64_t> bright_shots(det.shots, p_true);
  const auto b = static_cast<double>(bright_shots(engine));
  const auto n = static_cast<double>(det.shots);
  return poisson(b * det.mu_bright + (n - b) * det.mu_dark() + n * det.mu_background, engine);
}

std::uint64_t sample_reference_counts(const DetectionParams& det, Engine& engine) {
  const double mean = static_cast<double>(det.shots) * (det.mu_bright + det.mu_background);
  std::uint64_t r = 0;
  while (r == 0) r = poisson(mean, engine);
  return r;
}

double simulate_probability_estimate(double p_true, const DetectionParams& det, std::uint64_t seed) {
  det.validate();
  auto engine = make_engine(seed);
  const auto s = sample_signal_counts(p_true, det, engine);
  const auto r = sample_reference_counts(det, engine);
  return static_cast<double>(s) / static_cast<double>(r);
}

ProbabilityVector true_probabilities(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                     const ProbabilityRule& rule) {
  const auto states = prepare_states(t);
  const auto m = measurement_ket(spec);
  ProbabilityVector p{};
  for (std::size_t i = 0; i < kExperiments; ++i) p[i] = probability(rule, m, states[i]);
  return p;
}

SorkinReport run_protocol_batch(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                const ProbabilityRule& rule, const Readout& readout,
                                std::uint64_t seed) {
  const auto truth = true_probabilities(t, spec, rule);
  if (!readout) {
    return analyze_probabilities(truth, t, {Provenance::Mode::Exact, seed, 0});
  }
  const auto& det = *readout;
  det.validate();

  ProbabilityVector estimate{};
  if (det.reference == ReferenceMode::SharedPerBatch) {
    auto ref_engine = make_engine(derive_seed(seed, {kExperiments}));
    const auto r = static_cast<double>(sample_reference_counts(det, ref_engine));
    for (std::size_t i = 0; i < kExperiments; ++i) {
      auto engine = make_engine(derive_seed(seed, {i}));
      estimate[i] = static_cast<double>(sample_signal_counts(truth[i], det, engine)) / r;
    }
  } else {
    for (std::size_t i = 0; i < kExperiments; ++i) {
      estimate[i] = simulate_probability_estimate(truth[i], det, derive_seed(seed, {i}));
    }
  }
  return analyze_probabilities(estimate, t, {Provenance::Mode::Simulated, seed, det.shots});
}

std::uint64_t batch_seed(std::uint64_t master_seed, std::uint64_t index) {
  return derive_seed(master_seed, {0xBA7C4ULL, index});
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SORKIN_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SorkinReport> run_batches(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                      const ProbabilityRule& rule, const Readout& readout,
                                      std::size_t batches, std::uint64_t master_seed,
                                      unsigned threads) {
  std::vector<SorkinReport> reports(batches);
  parallel_for(batches, threads, [&](std::size_t i) {
    reports[i] = run_protocol_batch(t, spec, rule, readout, batch_seed(master_seed, i));
  });
  return reports;
}

KappaEstimate estimate_kappa(std::span<const SorkinReport> batches, std::uint64_t bootstrap_seed,
                             std::size_t resamples) {
  const std::size_t m = batches.size();
  if (m < 2) {
    throw InsufficientBatchesError("estimate_kappa needs at least 2 batches, got " +
                                   std::to_string(m));
  }
  KappaEstimate est;
  est.per_batch_kappa.reserve(m);
  for (const auto& r : batches) est.per_batch_kappa.push_back(r.kappa);
  const std::span<const double> ks(est.per_batch_kappa);
  est.mean = mean_of(ks);
  est.std_dev = sample_std(ks, est.mean);
  est.std_error = est.std_dev / std::sqrt(static_cast<double>(m));

  if (resamples == 0) {
    est.ci95 = {est.mean, est.mean};
    return est;
  }
  auto engine = make_engine(derive_seed(bootstrap_seed, {0xB0075ULL}));
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<double> means(resamples);
  for (auto& mean : means) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += ks[pick(engine)];
    mean = sum / static_cast<double>(m);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, resamples - 1);
    return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  // The percentile interval can in principle miss the sample mean for very
  // skewed samples; the reported interval always contains it.
  est.ci95 = {std::min(quantile(0.025), est.mean), std::max(quantile(0.975), est.mean)};
  return est;
}

ProbabilityRule make_rule(RuleFamily family, double epsilon) {
  return family == RuleFamily::AdditiveTriple ? ProbabilityRule::additive_triple(epsilon)
                                              : ProbabilityRule::exponent_deformed(epsilon);
}

SensitivityTable sensitivity_scan(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                  RuleFamily family, std::span<const double> eps_grid,
                                  const Readout& readout, std::size_t batches,
                                  std::uint64_t master_seed, std::size_t trials,
                                  unsigned threads) {
  if (batches < 2) throw InsufficientBatchesError("sensitivity_scan needs at least 2 batches");
  if (trials < 1) throw ArgumentError("sensitivity_scan needs at least 1 trial");
  SensitivityTable table;
  const double root_m = std::sqrt(static_cast<double>(batches));
  for (double eps : eps_grid) {
    const auto rule = make_rule(family, eps);
    SensitivityRow row;
    row.epsilon = eps;
    std::size_t hits = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      // Same noise streams for every epsilon (common random numbers).
      const auto reports = run_batches(t, spec, rule, readout, batches,
                                       derive_seed(master_seed, {trial}), threads);
      const auto est = estimate_kappa(reports, 0, 0);
      row.kappa_mean += est.mean;
      row.kappa_std += est.std_dev;
      // The identity tolerance keeps exact-mode Born rows (kappa ~ 1e-17) undetected.
      if (std::abs(est.mean) > 3.0 * est.std_dev / root_m + kIdentityTol) ++hits;
    }
    const auto n = static_cast<double>(trials);
    row.kappa_mean /= n;
    row.kappa_std /= n;
    row.detection_fraction = static_cast<double>(hits) / n;
    row.detected = row.detection_fraction >= 0.5;
    if (row.detected && !table.smallest_detected) table.smallest_detected = eps;
    table.rows.push_back(row);
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& lo = table.rows[i - 1];
    const auto& hi = table.rows[i];
    if (lo.detection_fraction < 0.5 && hi.detection_fraction >= 0.5) {
      const double w = (0.5 - lo.detection_fraction) / (hi.detection_fraction - lo.detection_fraction);
      table.threshold_crossing = lo.epsilon + w * (hi.epsilon - lo.epsilon);
      break;
    }
  }
  return table;
}

std::vector<ScalingRow> scaling_check(const TargetAmplitudes& t, const MeasurementSpec& spec,
                                      const Readout& readout,
                                      std::span<const std::uint64_t> shot_list,
                                      std::size_t batches, std::uint64_t master_seed,
                                      unsigned threads) {
  if (!std::is_sorted(shot_list.begin(), shot_list.end())) {
    throw ArgumentError("scaling_check needs an ascending shot list");
  }
  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i < shot_list.size(); ++i) {
    Readout r = readout;
    if (r) r->shots = shot_list[i];
    const auto reports =
        run_batches(t, spec, ProbabilityRule::born(), r, batches, derive_seed(master_seed, {i}), threads);
    rows.push_back({shot_list[i], estimate_kappa(reports, 0, 0).std_dev});
  }
  return rows;
}

}  // namespace sorkin
