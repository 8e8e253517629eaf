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

#include "sorkin_lab/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sorkin {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::json report_to_json(const SorkinReport& r) {
  nlohmann::json j;
  j["p"] = r.p;
  j["q_a"] = r.q_a;
  j["q_b"] = r.q_b;
  j["q_c"] = r.q_c;
  j["I_ab"] = r.second_order.ab;
  j["I_ac"] = r.second_order.ac;
  j["I_bc"] = r.second_order.bc;
  j["I2"] = r.i2;
  j["I3"] = r.i3;
  j["kappa"] = r.kappa;
  if (r.provenance.mode == Provenance::Mode::Exact) {
    j["provenance"] = {{"mode", "exact"}};
  } else {
    j["provenance"] = {
        {"mode", "simulated"}, {"seed", r.provenance.seed}, {"shots", r.provenance.shots}};
  }
  return j;
}

nlohmann::json estimate_to_json(const KappaEstimate& e) {
  return {
      {"batches", e.per_batch_kappa.size()},
      {"mean", e.mean},
      {"std", e.std_dev},
      {"stderr", e.std_error},
      {"ci95", {e.ci95.first, e.ci95.second}},
  };
}

std::string batches_csv(std::span<const SorkinReport> reports) {
  std::ostringstream out;
  out << "batch,p1,p2,p3,p4,p5,p6,p7,I_ab,I_ac,I_bc,I2,I3,kappa\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << i;
    for (double p : r.p) out << ',' << format_double(p);
    out << ',' << format_double(r.second_order.ab) << ',' << format_double(r.second_order.ac) << ','
        << format_double(r.second_order.bc) << ',' << format_double(r.i2) << ','
        << format_double(r.i3) << ',' << format_double(r.kappa) << '\n';
  }
  return out.str();
}

std::string sensitivity_csv(const SensitivityTable& table) {
  std::ostringstream out;
  out << "epsilon,kappa_mean,kappa_std,detected,detection_fraction\n";
  for (const auto& row : table.rows) {
    out << format_double(row.epsilon) << ',' << format_double(row.kappa_mean) << ','
        << format_double(row.kappa_std) << ',' << (row.detected ? "true" : "false") << ','
        << format_double(row.detection_fraction) << '\n';
  }
  return out.str();
}

}  // namespace sorkin
