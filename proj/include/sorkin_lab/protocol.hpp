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

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "sorkin_lab/dynamics.hpp"
#include "sorkin_lab/qutrit.hpp"

namespace sorkin {

inline constexpr std::size_t kExperiments = 7;

using ProbabilityVector = std::array<double, kExperiments>;
using StateSet = std::array<QutritState, kExperiments>;

/// Real amplitudes of the three-path state a|0> + b|+1> + c|-1>. Rotations
/// about y from |0> only ever produce real vectors.
struct TargetAmplitudes {
  double a = 0.0;  // |0>
  double b = 0.0;  // |+1>
  double c = 0.0;  // |-1>

  /// a = 1/sqrt(3), b = c = -1/sqrt(3)
  static TargetAmplitudes reference();

  /// Throws NormalizationError unless a^2 + b^2 + c^2 = 1 within 1e-9.
  void validate() const;
  QutritState state() const { return QutritState(b, a, c); }
};

/// Defines |m> = R2^dagger(theta2) R1^dagger(theta1) |0>.
struct MeasurementSpec {
  double theta1 = 0.0;
  double theta2 = 0.0;

  /// theta1 = theta2 = pi/2
  static MeasurementSpec m1();
  /// theta1 = 3 pi/2, theta2 = pi/2
  static MeasurementSpec m2();
};

/// Rotation angles of one preparation U = R2(mw2) R1(mw1).
struct AnglePair {
  double mw1 = 0.0;
  double mw2 = 0.0;
};

/// The published seven-experiment angle list, in published order.
std::array<AnglePair, kExperiments> preparation_angle_table();

/// psi1 = (a,b,c); psi2..psi4 the normalized two-path states;
/// psi5..psi7 = sign(x)|level> (sign(0) = +1).
/// Throws DegenerateProtocolError if any pairwise norm vanishes.
StateSet prepare_states(const TargetAmplitudes& t);

QutritState measurement_ket(const MeasurementSpec& spec);

struct SecondOrderTerms {
  double ab = 0.0;
  double ac = 0.0;
  double bc = 0.0;

  /// |I_ab| + |I_ac| + |I_bc|
  double magnitude_sum() const;
};

/// Extracted from the measured probabilities alone:
///   I_ab = (a^2+b^2) p2 - a^2 p5 - b^2 p6, and likewise for ac, bc.
SecondOrderTerms second_order_terms(const ProbabilityVector& p, const TargetAmplitudes& t);

/// I3 = p1 - (a^2+b^2) p2 - (a^2+c^2) p3 - (b^2+c^2) p4 + a^2 p5 + b^2 p6 + c^2 p7
double third_order_term(const ProbabilityVector& p, const TargetAmplitudes& t);

inline constexpr double kDefaultKappaFloor = 1e-6;

/// I3 / (|I_ab| + |I_ac| + |I_bc|). Throws NotQuantumRegimeError when the
/// denominator is at or below `floor`.
double kappa(double i3, const SecondOrderTerms& terms, double floor = kDefaultKappaFloor);

/// Pulse schedules preparing psi1..psi7 from |0>, with durations at a given
/// Rabi frequency. psi5..psi7 follow fixed rules (no pulse, R2(pi), R1(pi))
/// and match prepare_states only up to `global_sign`.
struct PreparationPlan {
  std::array<PulseSchedule, kExperiments> schedules;
  std::array<int, kExperiments> global_sign{1, 1, 1, 1, 1, 1, 1};
  double rabi_frequency_hz = 0.0;

  AnglePair angles(std::size_t experiment) const;
};

/// Solves the preparation conditions for every state, choosing the smallest
/// non-negative angles (shortest pulses). Throws DegenerateProtocolError for
/// the cases prepare_states rejects and when a = 0 (the psi2/psi3 conditions
/// are ratios over a).
PreparationPlan solve_schedule(const TargetAmplitudes& t, double rabi_frequency_hz);

/// Sorkin term of order k over the first k path amplitudes:
///   I_k = sum over S subset {1..k} of (-1)^(k-|S|) |sum_{j in S} w_j|^2.
/// Throws ArgumentError unless 2 <= k <= weights.size() (and k <= 30).
double sorkin_term(int order, std::span<const Complex> path_weights);

struct Provenance {
  enum class Mode { Exact, Simulated };
  Mode mode = Mode::Exact;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
};

/// Everything derived from one seven-probability batch.
struct SorkinReport {
  ProbabilityVector p{};
  double q_a = 0.0;
  double q_b = 0.0;
  double q_c = 0.0;
  SecondOrderTerms second_order;
  double i2 = 0.0;
  double i3 = 0.0;
  double kappa = 0.0;
  Provenance provenance;
};

/// Runs the analysis chain on seven probabilities (or probability estimates).
SorkinReport analyze_probabilities(const ProbabilityVector& p, const TargetAmplitudes& t,
                                   Provenance provenance = {},
                                   double kappa_floor = kDefaultKappaFloor);

}  // namespace sorkin
