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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sorkin_lab/qutrit.hpp"

namespace sorkin {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// MW1 drives |0> <-> |-1>, MW2 drives |0> <-> |+1>.
enum class Channel { MW1, MW2 };

const char* to_string(Channel channel);

/// NV ground-state parameters. Interface units are Hz (and Hz/G, G, s);
/// everything is converted to rad/s internally.
struct HamiltonianParams {
  double zero_field_splitting_hz = 2.87e9;
  double gyromagnetic_hz_per_gauss = 2.80e6;
  double field_gauss = 510.0;
  double rabi_frequency_hz = 5.0e6;
  std::optional<double> t2star_s = 1.5e-6;

  /// Resonance of the transition driven by `channel`: D - gamma_e B for MW1,
  /// D + gamma_e B for MW2.
  double transition_frequency_hz(Channel channel) const;

  /// Throws ArgumentError for non-positive or non-finite parameters.
  void validate() const;

  /// Non-empty when the Rabi frequency exceeds 5% of the lower transition.
  std::optional<std::string> weak_drive_warning() const;
};

/// One microwave pulse. `angle` is the rotation angle theta = omega1 * t.
/// R1/R2 depend on theta/2, so the period is 4 pi and angles live in [0, 4 pi).
struct PulseSegment {
  Channel channel = Channel::MW1;
  double angle = 0.0;

  /// Pulse length at the given Rabi frequency (Hz).
  double duration_s(double rabi_frequency_hz) const;
};

/// Smallest non-negative representative modulo 4 pi.
double canonical_angle(double theta);

/// Ordered pulse list, earliest first. Zero-angle pulses are not stored.
struct PulseSchedule {
  std::vector<PulseSegment> segments;

  void append(Channel channel, double angle);
  bool empty() const { return segments.empty(); }
  /// Total rotation angle applied on `channel`.
  double angle(Channel channel) const;
  double duration_s(double rabi_frequency_hz) const;
  /// RWA propagator of the whole schedule.
  Unitary3 propagator() const;
};

/// RWA rotation on |0> <-> |-1>:
/// [[1,0,0],[0,cos(theta/2),sin(theta/2)],[0,-sin(theta/2),cos(theta/2)]]
Unitary3 rotation_r1(double theta);
/// RWA rotation on |+1> <-> |0>:
/// [[cos(theta/2),-sin(theta/2),0],[sin(theta/2),cos(theta/2),0],[0,0,1]]
Unitary3 rotation_r2(double theta);
Unitary3 rotation(Channel channel, double theta);

/// exp(-i H dt) for Hermitian H via eigendecomposition.
Unitary3 hermitian_exponential(const Matrix3& hamiltonian, double dt);

/// D Sz^2 + gamma_e B Sz in rad/s.
Matrix3 static_hamiltonian(const HamiltonianParams& params);

/// Lab-frame drive sign per channel. MW1 carries a pi phase so that the RWA
/// limit of the lab-frame evolution is exactly rotation_r1.
double drive_sign(Channel channel);

enum class StepScheme {
  /// Piecewise-constant H sampled at each step midpoint (2nd order).
  Midpoint,
  /// Two-point Gauss-Legendre Magnus effective Hamiltonian (4th order).
  Magnus4,
};

inline constexpr int kDefaultStepsPerDrivePeriod = 200;
inline constexpr int kMinStepsPerDrivePeriod = 50;

struct IntegratorOptions {
  int steps_per_drive_period = kDefaultStepsPerDrivePeriod;
  StepScheme scheme = StepScheme::Magnus4;
};

/// Integrates i dU/dt = (H0 + sqrt(2) w1 cos(w t) Sy) U with the drive resonant
/// with `channel`, and returns exp(+i H0 T) U(T), the interaction-picture
/// propagator directly comparable with rotation_r1/r2. Counter-rotating
/// terms and crosstalk to the other transition are included.
/// Throws IntegrationError if steps_per_drive_period < 50.
Unitary3 lab_frame_propagator(const HamiltonianParams& params, Channel channel, double duration_s,
                              double drive_amplitude_hz, const IntegratorOptions& options = {});

/// Same, with duration angle / omega1 and amplitude omega1 from `params`.
Unitary3 lab_frame_propagator(const HamiltonianParams& params, const PulseSegment& segment,
                              const IntegratorOptions& options = {});

/// |<psi_RWA|psi_full>|^2 starting from |0>.
double rwa_fidelity(const HamiltonianParams& params, const PulseSegment& segment,
                    const IntegratorOptions& options = {});

/// Quasi-static detuning in Hz: Gaussian, mean 0, sigma = sqrt(2) / (2 pi T2*),
/// so the free-induction envelope is exp(-(t/T2*)^2). Infinite T2* gives 0.
/// Throws ArgumentError for T2* <= 0.
double sample_detuning(double t2star_s, std::uint64_t seed);
double detuning_sigma_hz(double t2star_s);

/// Rotating-frame RWA Hamiltonian (rad/s) with the driven level shifted by
/// `detuning_hz`. At zero detuning exp(-i H theta/omega1) is rotation(channel, theta).
Matrix3 rotating_frame_hamiltonian(Channel channel, double rabi_frequency_hz, double detuning_hz);

Unitary3 detuned_rotation(Channel channel, double theta, double rabi_frequency_hz,
                          double detuning_hz);

/// Mean |<psi_ideal|psi_detuned>|^2 of a schedule applied to |0>, averaged over
/// `shots` quasi-static detunings drawn for T2*.
double dephased_fidelity(const PulseSchedule& schedule, double rabi_frequency_hz, double t2star_s,
                         int shots, std::uint64_t seed);

}  // namespace sorkin
