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

#include "sorkin_lab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "sorkin_lab/report.hpp"
#include "sorkin_lab/version.hpp"

namespace sorkin {

namespace {

std::ostream& out_of(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_of(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

nlohmann::json envelope(const char* command, const ExperimentConfig& config) {
  nlohmann::json j;
  j["schema"] = std::string("sorkin-lab.") + command + "/1";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = config.master_seed;
  j["config"] = config_to_json(config);
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

std::filesystem::path out_dir_or_cwd(const CommandContext& ctx) {
  return ctx.out_dir.value_or(std::filesystem::path("."));
}

void emit_json(const nlohmann::json& j, const char* file_name, const CommandContext& ctx) {
  const auto text = j.dump(2) + "\n";
  out_of(ctx) << text;
  if (ctx.out_dir) write_file(*ctx.out_dir / file_name, text);
}

void warn_drive(const ExperimentConfig& config, const CommandContext& ctx) {
  if (auto w = config.hamiltonian.weak_drive_warning()) err_of(ctx) << "warning: " << *w << "\n";
}

nlohmann::json segment_json(const PulseSegment& s, double rabi_hz) {
  return {{"channel", to_string(s.channel)},
          {"angle_rad", s.angle},
          {"angle_over_pi", s.angle / std::numbers::pi},
          {"duration_ns", s.duration_s(rabi_hz) * 1e9}};
}

}  // namespace

int cmd_ideal(const ExperimentConfig& config, const CommandContext& ctx) {
  const auto report =
      run_protocol_batch(config.amplitudes, config.measurement, config.rule, std::nullopt, 0);
  auto j = envelope("ideal", config);
  j["rule"] = config.rule.label();
  j["report"] = report_to_json(report);
  emit_json(j, "ideal.json", ctx);
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& config, const CommandContext& ctx) {
  const auto reports = run_batches(config.amplitudes, config.measurement, config.rule,
                                   config.detection, config.batches, config.master_seed, ctx.threads);
  const auto estimate = estimate_kappa(reports, derive_seed(config.master_seed, {0xC1ULL}));

  const auto dir = out_dir_or_cwd(ctx);
  write_file(dir / "batches.csv", batches_csv(reports));

  const bool null_applies = config.rule.is_born() && config.detection.has_value();
  const bool rejected = null_applies && std::abs(estimate.mean) > 5.0 * estimate.std_error;

  auto j = envelope("simulate", config);
  j["csv_schema"] = kBatchesCsvSchema;
  j["rule"] = config.rule.label();
  j["kappa"] = estimate_to_json(estimate);
  j["null_test"] = {
      {"applies", null_applies},
      {"z", estimate.std_error > 0.0 ? nlohmann::json(estimate.mean / estimate.std_error)
                                     : nlohmann::json()},
      {"rejected_at_5sigma", rejected},
  };
  j["files"] = {{"batches", "batches.csv"}, {"summary", "summary.json"}};
  const auto text = j.dump(2) + "\n";
  write_file(dir / "summary.json", text);
  out_of(ctx) << text;
  if (rejected) {
    err_of(ctx) << "null rejected: |mean kappa| = " << std::abs(estimate.mean) << " > 5 x stderr ("
                << estimate.std_error << ")\n";
    return kExitNullRejected;
  }
  return kExitOk;
}

int cmd_rwa_check(const ExperimentConfig& config, const CommandContext& ctx) {
  warn_drive(config, ctx);
  const auto& h = config.hamiltonian;
  const auto plan = solve_schedule(config.amplitudes, h.rabi_frequency_hz);
  auto j = envelope("rwa-check", config);

  const PulseSegment pi_pulse{Channel::MW1, std::numbers::pi};
  j["reference_pi_pulse"] = segment_json(pi_pulse, h.rabi_frequency_hz);
  j["reference_pi_pulse"]["rwa_fidelity"] = rwa_fidelity(h, pi_pulse, config.integrator);

  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < kExperiments; ++i) {
    const auto& schedule = plan.schedules[i];
    nlohmann::json pulses = nlohmann::json::array();
    for (const auto& s : schedule.segments) {
      auto p = segment_json(s, h.rabi_frequency_hz);
      p["rwa_fidelity"] = rwa_fidelity(h, s, config.integrator);
      pulses.push_back(p);
    }
    nlohmann::json row = {{"experiment", i + 1}, {"pulses", pulses}};
    if (h.t2star_s && !schedule.empty()) {
      row["dephased_fidelity"] =
          dephased_fidelity(schedule, h.rabi_frequency_hz, *h.t2star_s, config.dephasing_shots,
                            derive_seed(config.master_seed, {0xD3ULL, i}));
    }
    rows.push_back(row);
  }
  j["experiments"] = rows;
  emit_json(j, "rwa_check.json", ctx);
  return kExitOk;
}

int cmd_schedule(const ExperimentConfig& config, const CommandContext& ctx) {
  const double rabi = config.hamiltonian.rabi_frequency_hz;
  const auto plan = solve_schedule(config.amplitudes, rabi);
  const auto published = preparation_angle_table();
  auto j = envelope("schedule", config);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < kExperiments; ++i) {
    const auto angles = plan.angles(i);
    nlohmann::json match;
    for (std::size_t k = 0; k < kExperiments; ++k) {
      if (std::abs(published[k].mw1 - angles.mw1) < kConstructedTol &&
          std::abs(published[k].mw2 - angles.mw2) < kConstructedTol) {
        match = k + 1;
        break;
      }
    }
    nlohmann::json pulses = nlohmann::json::array();
    for (const auto& s : plan.schedules[i].segments) pulses.push_back(segment_json(s, rabi));
    rows.push_back({
        {"experiment", i + 1},
        {"mw1_angle_rad", angles.mw1},
        {"mw2_angle_rad", angles.mw2},
        {"mw1_duration_ns", angles.mw1 / (kTwoPi * rabi) * 1e9},
        {"mw2_duration_ns", angles.mw2 / (kTwoPi * rabi) * 1e9},
        {"global_sign", plan.global_sign[i]},
        {"pulses", pulses},
        {"published_row", match},
    });
  }
  j["rabi_frequency_hz"] = rabi;
  j["experiments"] = rows;
  j["note"] =
      "published_row names the row of the published angle list with identical angles; rows 2 "
      "and 3 of that list are exchanged relative to the two-path state definitions";
  emit_json(j, "schedule.json", ctx);
  return kExitOk;
}

int cmd_sensitivity(const ExperimentConfig& config, std::span<const double> eps_grid,
                    const CommandContext& ctx) {
  const auto& s = config.sensitivity;
  const auto table = sensitivity_scan(config.amplitudes, config.measurement, s.family, eps_grid,
                                      config.detection, config.batches, config.master_seed,
                                      s.trials, ctx.threads);
  const auto dir = out_dir_or_cwd(ctx);
  write_file(dir / "sensitivity.csv", sensitivity_csv(table));

  auto j = envelope("sensitivity", config);
  j["csv_schema"] = kSensitivityCsvSchema;
  j["family"] = s.family == RuleFamily::AdditiveTriple ? "triple" : "exponent";
  j["model_note"] = "deformation families are synthetic violation models, not physical predictions";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"kappa_mean", r.kappa_mean},
                    {"kappa_std", r.kappa_std},
                    {"detected", r.detected},
                    {"detection_fraction", r.detection_fraction}});
  }
  j["rows"] = rows;
  j["smallest_detected_eps"] =
      table.smallest_detected ? nlohmann::json(*table.smallest_detected) : nlohmann::json();
  j["threshold_crossing_eps"] =
      table.threshold_crossing ? nlohmann::json(*table.threshold_crossing) : nlohmann::json();

  if (s.family == RuleFamily::AdditiveTriple) {
    // kappa is exactly linear in eps for this family.
    constexpr double probe = 1e-2;
    const double slope = run_protocol_batch(config.amplitudes, config.measurement,
                                            ProbabilityRule::additive_triple(probe), std::nullopt, 0)
                             .kappa /
                         probe;
    j["exact_kappa_slope"] = slope;
    const auto zero = std::find_if(table.rows.begin(), table.rows.end(),
                                   [](const SensitivityRow& r) { return r.epsilon == 0.0; });
    if (config.detection && zero != table.rows.end() && slope != 0.0) {
      j["analytic_threshold_eps"] = 3.0 * zero->kappa_std /
                                    (std::sqrt(static_cast<double>(config.batches)) * std::abs(slope));
    }
  }
  j["files"] = {{"table", "sensitivity.csv"}, {"summary", "sensitivity.json"}};
  const auto text = j.dump(2) + "\n";
  write_file(dir / "sensitivity.json", text);
  out_of(ctx) << text;
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seven-experiment qutrit test of third-order interference", "sorkin-lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string measurement;
  std::string eps_list;
  unsigned threads = 0;
  app.add_option("--config", config_path, "Config file (key = value); defaults if omitted");
  app.add_option("--out", out_dir, "Directory for report files");
  auto* seed_opt = app.add_option("--seed", seed, "Override master_seed");
  app.add_option("--measurement", measurement, "Measurement preset M1|M2 (overrides config)")
      ->check(CLI::IsMember({"M1", "M2"}));
  app.add_option("--threads", threads, "Worker threads (overrides SORKIN_LAB_THREADS)");

  auto* ideal = app.add_subcommand("ideal", "Exact report under the configured rule");
  auto* simulate = app.add_subcommand("simulate", "Shot-noise batches -> CSV + JSON summary");
  auto* rwa = app.add_subcommand("rwa-check", "RWA fidelity of every preparation pulse");
  auto* schedule = app.add_subcommand("schedule", "Solved preparation schedules");
  auto* sensitivity = app.add_subcommand("sensitivity", "Detection power versus deformation strength");
  sensitivity->add_option("--eps", eps_list, "Comma-separated epsilon grid (overrides config)");
  for (auto* sub : {ideal, simulate, rwa, schedule, sensitivity}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    ExperimentConfig config = config_path.empty() ? parse_config_text("") : parse_config(config_path);
    if (*seed_opt) config.master_seed = seed;
    if (!measurement.empty()) config.measurement = parse_measurement(measurement, &config.measurement_label);

    CommandContext ctx;
    if (!out_dir.empty()) ctx.out_dir = std::filesystem::path(out_dir);
    ctx.out = &out;
    ctx.err = &err;
    ctx.threads = threads;

    if (ideal->parsed()) return cmd_ideal(config, ctx);
    if (simulate->parsed()) return cmd_simulate(config, ctx);
    if (rwa->parsed()) return cmd_rwa_check(config, ctx);
    if (schedule->parsed()) return cmd_schedule(config, ctx);
    const auto grid = eps_list.empty() ? config.sensitivity.eps_grid : parse_real_list(eps_list);
    return cmd_sensitivity(config, grid, ctx);
  } catch (const ConfigFileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace sorkin
