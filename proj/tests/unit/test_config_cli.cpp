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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sorkin_lab/commands.hpp"
#include "sorkin_lab/config.hpp"
#include "sorkin_lab/errors.hpp"

namespace sorkin {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sorkin_lab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "run.cfg";
  std::ofstream(path) << text;
  return path;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Config, DefaultsAreTheReferenceSetup) {
  const auto c = parse_config_text("");
  EXPECT_EQ(c.hamiltonian.rabi_frequency_hz, 5e6);
  EXPECT_EQ(c.hamiltonian.field_gauss, 510.0);
  EXPECT_EQ(c.batches, 50u);
  ASSERT_TRUE(c.detection.has_value());
  EXPECT_EQ(c.detection->shots, 2'000'000u);
  EXPECT_TRUE(c.rule.is_born());
  EXPECT_EQ(c.measurement_label, "M1");
}

TEST(Config, ParsesEveryFamilyOfKeys) {
  const auto c = parse_config_text(R"(
# comment line
hamiltonian.omega1 = 10e6   # trailing comment
hamiltonian.T2star = none
amplitudes = 1, 2, 2
amplitudes.normalize = true
measurement = M2
rule = triple:0.05
detection.shots = 20000
detection.reference = independent
batches = 7
master_seed = 123
integrator.scheme = midpoint
integrator.steps_per_period = 80
sensitivity.family = exponent
sensitivity.eps = 0, pi/100
sensitivity.trials = 3
)");
  EXPECT_EQ(c.hamiltonian.rabi_frequency_hz, 10e6);
  EXPECT_FALSE(c.hamiltonian.t2star_s.has_value());
  EXPECT_NEAR(c.amplitudes.a, 1.0 / 3, 1e-15);
  EXPECT_NEAR(c.amplitudes.c, 2.0 / 3, 1e-15);
  EXPECT_EQ(c.measurement_label, "M2");
  EXPECT_NEAR(c.measurement.theta1, 1.5 * std::numbers::pi, 1e-15);
  EXPECT_EQ(c.rule.kind(), ProbabilityRule::Kind::AdditiveTriple);
  EXPECT_EQ(c.detection->shots, 20000u);
  EXPECT_EQ(c.detection->reference, ReferenceMode::PerEstimate);
  EXPECT_EQ(c.batches, 7u);
  EXPECT_EQ(c.master_seed, 123u);
  EXPECT_EQ(c.integrator.scheme, StepScheme::Midpoint);
  EXPECT_EQ(c.integrator.steps_per_drive_period, 80);
  EXPECT_EQ(c.sensitivity.family, RuleFamily::ExponentDeformed);
  ASSERT_EQ(c.sensitivity.eps_grid.size(), 2u);
  EXPECT_NEAR(c.sensitivity.eps_grid[1], std::numbers::pi / 100, 1e-15);
  EXPECT_EQ(c.sensitivity.trials, 3u);
  EXPECT_FALSE(parse_config_text("detection = exact").detection.has_value());
}

TEST(Config, PiExpressions) {
  EXPECT_NEAR(parse_real("pi/2"), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(parse_real("3pi/2"), 1.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(parse_real("3*pi/2"), 1.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(parse_real("-pi"), -std::numbers::pi, 1e-15);
  EXPECT_NEAR(parse_real(" 0.25 "), 0.25, 0);
  EXPECT_THROW(parse_real("pi*2"), ArgumentError);
  EXPECT_THROW(parse_real("abc"), ArgumentError);
  const auto m = parse_measurement("pi/2, 3pi/2");
  EXPECT_NEAR(m.theta2, 1.5 * std::numbers::pi, 1e-15);
}

void expect_key_error(const std::string& text, const std::string& key) {
  try {
    parse_config_text(text);
    FAIL() << "no error for: " << text;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), key) << e.what();
    EXPECT_NE(std::string(e.what()).find(key), std::string::npos);
  }
}

TEST(Config, SchemaViolationsNameTheKey) {
  expect_key_error("bogus = 1", "bogus");
  expect_key_error("batches = 1", "batches");
  expect_key_error("batches = many", "batches");
  expect_key_error("batches = 3\nbatches = 4", "batches");
  expect_key_error("hamiltonian.omega1 = -5", "hamiltonian.omega1");
  expect_key_error("detection.contrast = 1.5", "detection.contrast");
  expect_key_error("amplitudes = 1, 1, 1", "amplitudes");
  expect_key_error("rule = cubic", "rule");
  expect_key_error("integrator.steps_per_period = 10", "integrator.steps_per_period");
  expect_key_error("measurement =", "measurement");
}

TEST(Config, MissingFile) {
  EXPECT_THROW(parse_config("/definitely/not/here.cfg"), ConfigFileError);
}

TEST(Config, JsonEchoesResolvedValues) {
  const auto j = config_to_json(parse_config_text("rule = exponent:0.1\ndetection = exact"));
  EXPECT_EQ(j["rule"]["label"], "exponent:0.1");
  EXPECT_TRUE(j["rule"]["synthetic"].get<bool>());
  EXPECT_EQ(j["detection"]["mode"], "exact");
  EXPECT_EQ(j["measurement"]["label"], "M1");
}

TEST(Cli, IdealPrintsExactReport) {
  const auto r = cli({"ideal"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "sorkin-lab.ideal/1");
  EXPECT_NEAR(j["report"]["I2"].get<double>(), 0.638071, 1e-6);
  EXPECT_EQ(j["report"]["provenance"]["mode"], "exact");
  const auto m2 = nlohmann::json::parse(cli({"ideal", "--measurement", "M2"}).out);
  EXPECT_NEAR(m2["report"]["p"][2].get<double>(), j["report"]["p"][3].get<double>(), 1e-12);
}

TEST(Cli, SimulateWritesFilesAndIsSeedDeterministic) {
  const auto dir = scratch_dir("simulate");
  const auto cfg = write_config(dir, "batches = 20\ndetection.shots = 200000\n");
  const auto r1 = cli({"simulate", "--config", cfg.string(), "--out", (dir / "a").string(), "--seed", "9"});
  ASSERT_EQ(r1.code, kExitOk) << r1.err;
  const auto r2 = cli({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--seed", "9",
                       "--threads", "3"});
  ASSERT_EQ(r2.code, kExitOk);
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const auto csv = slurp(dir / "a" / "batches.csv");
  EXPECT_EQ(csv, slurp(dir / "b" / "batches.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "batch,p1,p2,p3,p4,p5,p6,p7,I_ab,I_ac,I_bc,I2,I3,kappa");
  const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  EXPECT_EQ(summary["seed"], 9);
  EXPECT_EQ(summary["kappa"]["batches"], 20);
  EXPECT_FALSE(summary["null_test"]["rejected_at_5sigma"].get<bool>());
}

TEST(Cli, SimulateRejectsNullWhenViolationIsInjected) {
  // Born is the only rule the null test applies to, so a violating rule exits 0;
  // a strongly deformed rule must still show a clear kappa.
  const auto dir = scratch_dir("violation");
  const auto cfg = write_config(dir, "rule = triple:1.0\nbatches = 20\n");
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["null_test"]["applies"].get<bool>());
  EXPECT_GT(j["kappa"]["mean"].get<double>(), 5 * j["kappa"]["stderr"].get<double>());
}

TEST(Cli, ScheduleAndRwaCheck) {
  const auto s = nlohmann::json::parse(cli({"schedule"}).out);
  ASSERT_EQ(s["experiments"].size(), 7u);
  EXPECT_EQ(s["experiments"][1]["published_row"], 3);
  EXPECT_EQ(s["experiments"][2]["published_row"], 2);
  EXPECT_NEAR(s["experiments"][6]["mw1_duration_ns"].get<double>(), 100.0, 1e-9);
  const auto r = nlohmann::json::parse(cli({"rwa-check"}).out);
  EXPECT_GE(r["reference_pi_pulse"]["rwa_fidelity"].get<double>(), 0.999);
  EXPECT_EQ(r["experiments"].size(), 7u);
}

TEST(Cli, SensitivityWritesTable) {
  const auto dir = scratch_dir("sensitivity");
  const auto r = cli({"sensitivity", "--out", dir.string(), "--eps", "0,0.1,0.3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_NEAR(j["exact_kappa_slope"].get<double>(), 0.106636, 1e-6);
  EXPECT_TRUE(fs::exists(dir / "sensitivity.csv"));
  EXPECT_TRUE(fs::exists(dir / "sensitivity.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"ideal", "--config", "/no/such/file.cfg"}).code, kExitMissingConfig);
  const auto dir = scratch_dir("exit");
  const auto bad = write_config(dir, "detection.shots = -4\n");
  const auto r = cli({"ideal", "--config", bad.string()});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("detection.shots"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitError);
  EXPECT_EQ(cli({"ideal", "--measurement", "M3"}).code, kExitError);
  const auto degenerate = write_config(dir, "amplitudes = 1, 0, 0\n");
  EXPECT_EQ(cli({"ideal", "--config", degenerate.string()}).code, kExitError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

#ifdef SORKIN_LAB_BINARY
TEST(Cli, BinaryExitCodes) {
  const std::string bin = SORKIN_LAB_BINARY;
  auto run = [&](const std::string& args) {
    const int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("ideal"), 0);
  EXPECT_EQ(run("ideal --config /no/such/file.cfg"), 2);
  EXPECT_EQ(run("bogus"), 3);
}
#endif

}  // namespace
}  // namespace sorkin
