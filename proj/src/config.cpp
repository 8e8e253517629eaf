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

#include "sorkin_lab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "sorkin_lab/version.hpp"

namespace sorkin {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double plain_number(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ArgumentError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (!text.empty() && res.ec == std::errc{} && res.ptr == end) return v;
  // Also accept integral floating forms such as 2e6.
  const double d = plain_number(text);
  if (d < 0.0 || d != std::floor(d) || d > 9.0e18) {
    throw ArgumentError("not a non-negative integer: '" + std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(d);
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ArgumentError("not a boolean: '" + std::string(text) + "'");
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

DetectionParams& detection_of(ExperimentConfig& c) {
  if (!c.detection) c.detection = DetectionParams{};
  return *c.detection;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"hamiltonian.D", [](auto& c, auto v) { c.hamiltonian.zero_field_splitting_hz = parse_real(v); }},
      {"hamiltonian.gamma_e",
       [](auto& c, auto v) { c.hamiltonian.gyromagnetic_hz_per_gauss = parse_real(v); }},
      {"hamiltonian.B", [](auto& c, auto v) { c.hamiltonian.field_gauss = parse_real(v); }},
      {"hamiltonian.omega1", [](auto& c, auto v) { c.hamiltonian.rabi_frequency_hz = parse_real(v); }},
      {"hamiltonian.T2star",
       [](auto& c, auto v) {
         if (v == "none") {
           c.hamiltonian.t2star_s.reset();
         } else {
           c.hamiltonian.t2star_s = parse_real(v);
         }
       }},
      {"amplitudes",
       [](auto& c, auto v) {
         const auto xs = parse_real_list(v);
         if (xs.size() != 3) throw ArgumentError("expected three amplitudes a, b, c");
         c.amplitudes = {xs[0], xs[1], xs[2]};
       }},
      // Handled after all keys are read; listed so the key is known.
      {"amplitudes.normalize", [](auto&, auto v) { parse_bool(v); }},
      {"measurement",
       [](auto& c, auto v) { c.measurement = parse_measurement(v, &c.measurement_label); }},
      {"rule", [](auto& c, auto v) { c.rule = ProbabilityRule::parse(v); }},
      {"detection",
       [](auto& c, auto v) {
         if (v == "exact") {
           c.detection.reset();
         } else if (v == "model") {
           detection_of(c);
         } else {
           throw ArgumentError("expected 'exact' or 'model'");
         }
       }},
      {"detection.mu_bright", [](auto& c, auto v) { detection_of(c).mu_bright = parse_real(v); }},
      {"detection.contrast", [](auto& c, auto v) { detection_of(c).contrast = parse_real(v); }},
      {"detection.mu_bg", [](auto& c, auto v) { detection_of(c).mu_background = parse_real(v); }},
      {"detection.shots", [](auto& c, auto v) { detection_of(c).shots = parse_count(v); }},
      {"detection.readout_window",
       [](auto& c, auto v) { detection_of(c).readout_window_s = parse_real(v); }},
      {"detection.reference",
       [](auto& c, auto v) {
         if (v == "shared") {
           detection_of(c).reference = ReferenceMode::SharedPerBatch;
         } else if (v == "independent") {
           detection_of(c).reference = ReferenceMode::PerEstimate;
         } else {
           throw ArgumentError("expected 'shared' or 'independent'");
         }
       }},
      {"batches", [](auto& c, auto v) { c.batches = parse_count(v); }},
      {"master_seed", [](auto& c, auto v) { c.master_seed = parse_count(v); }},
      {"integrator.steps_per_period",
       [](auto& c, auto v) { c.integrator.steps_per_drive_period = static_cast<int>(parse_count(v)); }},
      {"integrator.scheme",
       [](auto& c, auto v) {
         if (v == "magnus4") {
           c.integrator.scheme = StepScheme::Magnus4;
         } else if (v == "midpoint") {
           c.integrator.scheme = StepScheme::Midpoint;
         } else {
           throw ArgumentError("expected 'magnus4' or 'midpoint'");
         }
       }},
      {"kappa_floor", [](auto& c, auto v) { c.kappa_floor = parse_real(v); }},
      {"sensitivity.family",
       [](auto& c, auto v) {
         if (v == "triple") {
           c.sensitivity.family = RuleFamily::AdditiveTriple;
         } else if (v == "exponent") {
           c.sensitivity.family = RuleFamily::ExponentDeformed;
         } else {
           throw ArgumentError("expected 'triple' or 'exponent'");
         }
       }},
      {"sensitivity.eps", [](auto& c, auto v) { c.sensitivity.eps_grid = parse_real_list(v); }},
      {"sensitivity.trials", [](auto& c, auto v) { c.sensitivity.trials = parse_count(v); }},
      {"rwa.dephasing_shots",
       [](auto& c, auto v) { c.dephasing_shots = static_cast<int>(parse_count(v)); }},
  };
  return table;
}

void validate(const ExperimentConfig& c) {
  auto guard = [](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  };
  const auto& h = c.hamiltonian;
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(h.zero_field_splitting_hz)) throw ConfigError("hamiltonian.D", "must be > 0");
  if (!positive(h.gyromagnetic_hz_per_gauss)) throw ConfigError("hamiltonian.gamma_e", "must be > 0");
  if (!positive(h.field_gauss)) throw ConfigError("hamiltonian.B", "must be > 0");
  if (!positive(h.rabi_frequency_hz)) throw ConfigError("hamiltonian.omega1", "must be > 0");
  if (h.t2star_s && !positive(*h.t2star_s)) throw ConfigError("hamiltonian.T2star", "must be > 0");
  guard("hamiltonian", [&] { h.validate(); });
  guard("amplitudes", [&] { c.amplitudes.validate(); });
  if (c.detection) {
    try {
      c.detection->validate();
    } catch (const Error& e) {
      const std::string what = e.what();
      throw ConfigError(what.substr(0, what.find(' ')), what);
    }
  }
  if (c.batches < 2) throw ConfigError("batches", "must be >= 2");
  if (c.integrator.steps_per_drive_period < kMinStepsPerDrivePeriod) {
    throw ConfigError("integrator.steps_per_period",
                      "must be >= " + std::to_string(kMinStepsPerDrivePeriod));
  }
  if (!(c.kappa_floor >= 0.0)) throw ConfigError("kappa_floor", "must be >= 0");
  if (c.sensitivity.eps_grid.empty()) throw ConfigError("sensitivity.eps", "must not be empty");
  if (c.sensitivity.trials < 1) throw ConfigError("sensitivity.trials", "must be >= 1");
  if (c.dephasing_shots < 1) throw ConfigError("rwa.dephasing_shots", "must be >= 1");
}

nlohmann::json rule_json(const ProbabilityRule& rule) {
  nlohmann::json j;
  j["label"] = rule.label();
  j["description"] = rule.description();
  j["synthetic"] = !rule.is_born();
  return j;
}

}  // namespace

double parse_real(std::string_view text) {
  text = trim(text);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string_view::npos) return plain_number(text);

  // [coef][*]pi[/den]
  auto coef_text = trim(text.substr(0, pi_pos));
  if (!coef_text.empty() && coef_text.back() == '*') coef_text = trim(coef_text.substr(0, coef_text.size() - 1));
  double coef = 1.0;
  if (coef_text == "-") {
    coef = -1.0;
  } else if (coef_text == "+") {
    coef = 1.0;
  } else if (!coef_text.empty()) {
    coef = plain_number(coef_text);
  }
  auto rest = trim(text.substr(pi_pos + 2));
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ArgumentError("cannot parse '" + std::string(text) + "'");
    den = plain_number(trim(rest.substr(1)));
    if (den == 0.0) throw ArgumentError("division by zero in '" + std::string(text) + "'");
  }
  return coef * std::numbers::pi / den;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_real(part));
  return out;
}

MeasurementSpec parse_measurement(std::string_view text, std::string* label) {
  text = trim(text);
  if (text == "M1" || text == "m1") {
    if (label) *label = "M1";
    return MeasurementSpec::m1();
  }
  if (text == "M2" || text == "m2") {
    if (label) *label = "M2";
    return MeasurementSpec::m2();
  }
  const auto xs = parse_real_list(text);
  if (xs.size() != 2) throw ArgumentError("expected M1, M2 or 'theta1, theta2'");
  if (label) *label = "custom";
  return {xs[0], xs[1]};
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  bool normalize = false;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "empty value");
    try {
      it->second(config, value);
      if (key == "amplitudes.normalize") normalize = parse_bool(value);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  }
  if (normalize) {
    auto& t = config.amplitudes;
    const double n = std::sqrt(t.a * t.a + t.b * t.b + t.c * t.c);
    if (!(n > 0.0)) throw ConfigError("amplitudes", "cannot normalize the zero vector");
    t = {t.a / n, t.b / n, t.c / n};
  }
  validate(config);
  return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["hamiltonian"] = {
      {"D_hz", c.hamiltonian.zero_field_splitting_hz},
      {"gamma_e_hz_per_gauss", c.hamiltonian.gyromagnetic_hz_per_gauss},
      {"B_gauss", c.hamiltonian.field_gauss},
      {"omega1_hz", c.hamiltonian.rabi_frequency_hz},
      {"T2star_s", c.hamiltonian.t2star_s ? nlohmann::json(*c.hamiltonian.t2star_s) : nlohmann::json()},
  };
  j["amplitudes"] = {{"a", c.amplitudes.a}, {"b", c.amplitudes.b}, {"c", c.amplitudes.c}};
  j["measurement"] = {{"label", c.measurement_label},
                      {"theta1", c.measurement.theta1},
                      {"theta2", c.measurement.theta2}};
  j["rule"] = rule_json(c.rule);
  if (c.detection) {
    const auto& d = *c.detection;
    j["detection"] = {
        {"mode", "model"},
        {"mu_bright", d.mu_bright},
        {"contrast", d.contrast},
        {"mu_dark", d.mu_dark()},
        {"mu_bg", d.mu_background},
        {"shots", d.shots},
        {"readout_window_s", d.readout_window_s},
        {"reference", to_string(d.reference)},
    };
  } else {
    j["detection"] = {{"mode", "exact"}};
  }
  j["batches"] = c.batches;
  j["master_seed"] = c.master_seed;
  j["integrator"] = {
      {"steps_per_period", c.integrator.steps_per_drive_period},
      {"scheme", c.integrator.scheme == StepScheme::Magnus4 ? "magnus4" : "midpoint"},
  };
  j["kappa_floor"] = c.kappa_floor;
  j["sensitivity"] = {
      {"family", c.sensitivity.family == RuleFamily::AdditiveTriple ? "triple" : "exponent"},
      {"eps", c.sensitivity.eps_grid},
      {"trials", c.sensitivity.trials},
  };
  j["rwa"] = {{"dephasing_shots", c.dephasing_shots}};
  j["version"] = kVersion;
  return j;
}

}  // namespace sorkin
