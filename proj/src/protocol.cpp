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

#include "sorkin_lab/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sorkin_lab/errors.hpp"

namespace sorkin {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

void check_pairwise_norms(const TargetAmplitudes& t) {
  struct Pair {
    double norm2;
    const char* state;
    const char* what;
  };
  const Pair pairs[] = {
      {t.a * t.a + t.b * t.b, "psi2", "a = b = 0"},
      {t.a * t.a + t.c * t.c, "psi3", "a = c = 0"},
      {t.b * t.b + t.c * t.c, "psi4", "b = c = 0"},
  };
  for (const auto& p : pairs) {
    if (p.norm2 <= kIdentityTol * kIdentityTol) {
      throw DegenerateProtocolError(std::string(p.state) + " is undefined because " + p.what);
    }
  }
}

}  // namespace

TargetAmplitudes TargetAmplitudes::reference() {
  const double r = 1.0 / std::sqrt(3.0);
  return {r, -r, -r};
}

void TargetAmplitudes::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw NormalizationError("target amplitudes must be finite");
  }
  const double n = a * a + b * b + c * c;
  if (std::abs(n - 1.0) > kConstructedTol) {
    std::ostringstream msg;
    msg << "target amplitudes must satisfy a^2+b^2+c^2 = 1 (got " << n << ")";
    throw NormalizationError(msg.str());
  }
}

MeasurementSpec MeasurementSpec::m1() { return {kPi / 2.0, kPi / 2.0}; }
MeasurementSpec MeasurementSpec::m2() { return {3.0 * kPi / 2.0, kPi / 2.0}; }

std::array<AnglePair, kExperiments> preparation_angle_table() {
  return {{
      {std::acos(1.0 / 3.0), kPi / 2.0},
      {kPi / 2.0, 0.0},
      {0.0, kPi / 2.0},
      {kPi / 2.0, kPi},
      {0.0, 0.0},
      {0.0, kPi},
      {kPi, 0.0},
  }};
}

StateSet prepare_states(const TargetAmplitudes& t) {
  t.validate();
  check_pairwise_norms(t);
  const double ab = std::hypot(t.a, t.b);
  const double ac = std::hypot(t.a, t.c);
  const double bc = std::hypot(t.b, t.c);
  return {{
      t.state(),
      QutritState(t.b / ab, t.a / ab, 0.0),
      QutritState(0.0, t.a / ac, t.c / ac),
      QutritState(t.b / bc, 0.0, t.c / bc),
      QutritState(0.0, sign_of(t.a), 0.0),
      QutritState(sign_of(t.b), 0.0, 0.0),
      QutritState(0.0, 0.0, sign_of(t.c)),
  }};
}

QutritState measurement_ket(const MeasurementSpec& spec) {
  const auto u = compose(rotation_r2(spec.theta2).adjoint(), rotation_r1(spec.theta1).adjoint());
  return apply_unitary(u, QutritState::basis(Level::Zero));
}

double SecondOrderTerms::magnitude_sum() const {
  return std::abs(ab) + std::abs(ac) + std::abs(bc);
}

SecondOrderTerms second_order_terms(const ProbabilityVector& p, const TargetAmplitudes& t) {
  const double a2 = t.a * t.a;
  const double b2 = t.b * t.b;
  const double c2 = t.c * t.c;
  return {
      (a2 + b2) * p[1] - a2 * p[4] - b2 * p[5],
      (a2 + c2) * p[2] - a2 * p[4] - c2 * p[6],
      (b2 + c2) * p[3] - b2 * p[5] - c2 * p[6],
  };
}

double third_order_term(const ProbabilityVector& p, const TargetAmplitudes& t) {
  const double a2 = t.a * t.a;
  const double b2 = t.b * t.b;
  const double c2 = t.c * t.c;
  return p[0] - (a2 + b2) * p[1] - (a2 + c2) * p[2] - (b2 + c2) * p[3] + a2 * p[4] + b2 * p[5] +
         c2 * p[6];
}

double kappa(double i3, const SecondOrderTerms& terms, double floor) {
  const double i2 = terms.magnitude_sum();
  if (!(i2 > floor)) {
    std::ostringstream msg;
    msg << "second-order interference " << i2 << " <= floor " << floor
        << ": not in the quantum regime, kappa undefined";
    throw NotQuantumRegimeError(msg.str());
  }
  return i3 / i2;
}

AnglePair PreparationPlan::angles(std::size_t experiment) const {
  const auto& s = schedules.at(experiment);
  return {s.angle(Channel::MW1), s.angle(Channel::MW2)};
}

PreparationPlan solve_schedule(const TargetAmplitudes& t, double rabi_frequency_hz) {
  t.validate();
  check_pairwise_norms(t);
  if (!(rabi_frequency_hz > 0.0)) throw ArgumentError("Rabi frequency must be > 0");
  if (std::abs(t.a) <= kIdentityTol) {
    throw DegenerateProtocolError(
        "psi2 and psi3 are unreachable by the amplitude-ratio conditions when a = 0");
  }

  PreparationPlan plan;
  plan.rabi_frequency_hz = rabi_frequency_hz;
  auto& s = plan.schedules;

  // psi1 = R2(t1') R1(t1)|0> = (-sin h' cos h, cos h' cos h, -sin h) with
  // half-angles h, h'. Two branches differ by the sign of cos h.
  {
    const double r = std::hypot(t.a, t.b);
    const double th1_a = canonical_angle(2.0 * std::atan2(-t.c, r));
    const double th2_a = canonical_angle(2.0 * std::atan2(-t.b, t.a));
    const double th1_b = canonical_angle(2.0 * std::atan2(-t.c, -r));
    const double th2_b = canonical_angle(2.0 * std::atan2(t.b, -t.a));
    const double area_a = th1_a + th2_a;
    const double area_b = th1_b + th2_b;
    const bool use_a = area_a < area_b || (area_a == area_b && th1_a <= th1_b);
    s[0].append(Channel::MW1, use_a ? th1_a : th1_b);
    s[0].append(Channel::MW2, use_a ? th2_a : th2_b);
  }
  // psi2 = R2(t2')|0> = (-sin h, cos h, 0) proportional to (b, a, 0).
  s[1].append(Channel::MW2, 2.0 * std::atan2(-t.b, t.a));
  // psi3 = R1(t3)|0> = (0, cos h, -sin h) proportional to (0, a, c).
  s[2].append(Channel::MW1, 2.0 * std::atan2(-t.c, t.a));
  // psi4: t4' = pi empties |0>, leaving (-cos h4, 0, -sin h4) proportional to (b, 0, c).
  s[3].append(Channel::MW1, 2.0 * std::atan2(-t.c, -t.b));
  s[3].append(Channel::MW2, kPi);
  // psi5: no pulse. psi6: R2(pi)|0> = -|+1>. psi7: R1(pi)|0> = -|-1>.
  s[5].append(Channel::MW2, kPi);
  s[6].append(Channel::MW1, kPi);
  plan.global_sign[4] = static_cast<int>(sign_of(t.a));
  plan.global_sign[5] = -static_cast<int>(sign_of(t.b));
  plan.global_sign[6] = -static_cast<int>(sign_of(t.c));
  return plan;
}

double sorkin_term(int order, std::span<const Complex> path_weights) {
  if (order < 2 || static_cast<std::size_t>(order) > path_weights.size()) {
    std::ostringstream msg;
    msg << "sorkin_term order " << order << " needs 2 <= k <= " << path_weights.size();
    throw ArgumentError(msg.str());
  }
  if (order > 30) throw ArgumentError("sorkin_term order above 30 is not supported");
  const std::uint32_t subsets = 1u << order;
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    Complex amplitude = 0.0;
    int size = 0;
    for (int j = 0; j < order; ++j) {
      if (mask & (1u << j)) {
        amplitude += path_weights[j];
        ++size;
      }
    }
    const double sign = ((order - size) % 2 == 0) ? 1.0 : -1.0;
    total += sign * std::norm(amplitude);
  }
  return total;
}

SorkinReport analyze_probabilities(const ProbabilityVector& p, const TargetAmplitudes& t,
                                   Provenance provenance, double kappa_floor) {
  SorkinReport r;
  r.p = p;
  r.q_a = t.a * t.a * p[4];
  r.q_b = t.b * t.b * p[5];
  r.q_c = t.c * t.c * p[6];
  r.second_order = second_order_terms(p, t);
  r.i2 = r.second_order.magnitude_sum();
  r.i3 = third_order_term(p, t);
  r.kappa = kappa(r.i3, r.second_order, kappa_floor);
  r.provenance = provenance;
  return r;
}

}  // namespace sorkin
