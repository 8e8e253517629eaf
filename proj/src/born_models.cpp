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

#include "sorkin_lab/born_models.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sorkin_lab/errors.hpp"

namespace sorkin {

namespace {

void check_epsilon(double epsilon) {
  if (!std::isfinite(epsilon)) throw ArgumentError("deformation epsilon must be finite");
}

std::string format_epsilon(double epsilon) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, epsilon);
  return std::string(buf, res.ptr);
}

}  // namespace

ProbabilityRule ProbabilityRule::exponent_deformed(double epsilon) {
  check_epsilon(epsilon);
  if (epsilon <= -2.0) throw ArgumentError("exponent deformation needs epsilon > -2");
  return {Kind::ExponentDeformed, epsilon};
}

ProbabilityRule ProbabilityRule::additive_triple(double epsilon) {
  check_epsilon(epsilon);
  return {Kind::AdditiveTriple, epsilon};
}

ProbabilityRule ProbabilityRule::parse(std::string_view text) {
  if (text == "born") return born();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("unknown probability rule '" + std::string(text) + "'");
  }
  const auto name = text.substr(0, colon);
  const auto value = text.substr(colon + 1);
  double eps = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), eps);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw ArgumentError("bad epsilon in rule '" + std::string(text) + "'");
  }
  if (name == "exponent") return exponent_deformed(eps);
  if (name == "triple") return additive_triple(eps);
  throw ArgumentError("unknown probability rule '" + std::string(text) + "'");
}

std::string ProbabilityRule::label() const {
  switch (kind_) {
    case Kind::Born:
      return "born";
    case Kind::ExponentDeformed:
      return "exponent:" + format_epsilon(epsilon_);
    case Kind::AdditiveTriple:
      return "triple:" + format_epsilon(epsilon_);
  }
  return "born";
}

std::string ProbabilityRule::description() const {
  switch (kind_) {
    case Kind::Born:
      return "Born rule |<m|psi>|^2";
    case Kind::ExponentDeformed:
      return "synthetic deformation: |<m|psi>|^(2+eps), eps=" + format_epsilon(epsilon_);
    case Kind::AdditiveTriple:
      return "synthetic deformation: Born + 2 eps Re(w_a conj(w_b) w_c), eps=" +
             format_epsilon(epsilon_);
  }
  return {};
}

double probability(const ProbabilityRule& rule, const QutritState& m, const QutritState& psi) {
  if (!m.is_normalized() || !psi.is_normalized()) {
    throw NormalizationError("probability() needs normalized measurement ket and state");
  }
  switch (rule.kind()) {
    case ProbabilityRule::Kind::Born:
      return std::norm(inner_product(m, psi));
    case ProbabilityRule::Kind::ExponentDeformed:
      return std::pow(std::abs(inner_product(m, psi)), 2.0 + rule.epsilon());
    case ProbabilityRule::Kind::AdditiveTriple: {
      const Complex wa = std::conj(m.c_zero()) * psi.c_zero();
      const Complex wb = std::conj(m.c_plus()) * psi.c_plus();
      const Complex wc = std::conj(m.c_minus()) * psi.c_minus();
      const double p = std::norm(wa + wb + wc) + 2.0 * rule.epsilon() * std::real(wa * std::conj(wb) * wc);
      if (p < 0.0 || p > 1.0) {
        std::ostringstream msg;
        msg << "triple deformation eps=" << rule.epsilon() << " gives probability " << p
            << " outside [0, 1]";
        throw UnphysicalParameterError(msg.str());
      }
      return p;
    }
  }
  return 0.0;
}

}  // namespace sorkin
