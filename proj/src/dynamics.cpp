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

#include "sorkin_lab/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

#include "sorkin_lab/errors.hpp"
#include "sorkin_lab/random.hpp"

namespace sorkin {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

const char* to_string(Channel channel) { return channel == Channel::MW1 ? "MW1" : "MW2"; }

double HamiltonianParams::transition_frequency_hz(Channel channel) const {
  const double zeeman = gyromagnetic_hz_per_gauss * field_gauss;
  return channel == Channel::MW1 ? zero_field_splitting_hz - zeeman
                                 : zero_field_splitting_hz + zeeman;
}

void HamiltonianParams::validate() const {
  if (!positive_finite(zero_field_splitting_hz)) throw ArgumentError("D must be > 0");
  if (!positive_finite(gyromagnetic_hz_per_gauss)) throw ArgumentError("gamma_e must be > 0");
  if (!positive_finite(field_gauss)) throw ArgumentError("B must be > 0");
  if (!positive_finite(rabi_frequency_hz)) throw ArgumentError("omega1 must be > 0");
  if (t2star_s && !(*t2star_s > 0.0)) throw ArgumentError("T2star must be > 0");
  // Above the level crossing MW1 would have no positive resonance.
  if (!(transition_frequency_hz(Channel::MW1) > 0.0)) {
    throw ArgumentError("D - gamma_e B must be > 0");
  }
}

std::optional<std::string> HamiltonianParams::weak_drive_warning() const {
  const double lowest = transition_frequency_hz(Channel::MW1);
  if (rabi_frequency_hz > 0.05 * lowest) {
    std::ostringstream msg;
    msg << "omega1 = " << rabi_frequency_hz << " Hz exceeds 5% of the MW1 transition (" << lowest
        << " Hz); the rotating-wave approximation degrades";
    return msg.str();
  }
  return std::nullopt;
}

double PulseSegment::duration_s(double rabi_frequency_hz) const {
  return angle / (kTwoPi * rabi_frequency_hz);
}

double canonical_angle(double theta) {
  constexpr double period = 2.0 * kTwoPi;
  double r = std::fmod(theta, period);
  if (r < 0.0) r += period;
  // fmod can land exactly on the period after the shift.
  if (r >= period) r -= period;
  return r;
}

void PulseSchedule::append(Channel channel, double angle) {
  const double a = canonical_angle(angle);
  if (a != 0.0) segments.push_back({channel, a});
}

double PulseSchedule::angle(Channel channel) const {
  double total = 0.0;
  for (const auto& s : segments) {
    if (s.channel == channel) total += s.angle;
  }
  return total;
}

double PulseSchedule::duration_s(double rabi_frequency_hz) const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration_s(rabi_frequency_hz);
  return total;
}

Unitary3 PulseSchedule::propagator() const {
  Unitary3 u = Unitary3::identity();
  for (const auto& s : segments) u = compose(rotation(s.channel, s.angle), u);
  return u;
}

Unitary3 rotation_r1(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Matrix3 m = Matrix3::Identity();
  m(1, 1) = c;
  m(1, 2) = s;
  m(2, 1) = -s;
  m(2, 2) = c;
  return Unitary3::from_matrix(m);
}

Unitary3 rotation_r2(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Matrix3 m = Matrix3::Identity();
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return Unitary3::from_matrix(m);
}

Unitary3 rotation(Channel channel, double theta) {
  return channel == Channel::MW1 ? rotation_r1(theta) : rotation_r2(theta);
}

Unitary3 hermitian_exponential(const Matrix3& hamiltonian, double dt) {
  const Eigen::SelfAdjointEigenSolver<Matrix3> eig(hamiltonian);
  const auto& v = eig.eigenvectors();
  Vector3 phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * dt);
  return Unitary3::from_matrix(v * phases.asDiagonal() * v.adjoint());
}

Matrix3 static_hamiltonian(const HamiltonianParams& params) {
  const auto& s = spin1_matrices();
  return kTwoPi * (params.zero_field_splitting_hz * s.sz * s.sz +
                   params.gyromagnetic_hz_per_gauss * params.field_gauss * s.sz);
}

double drive_sign(Channel channel) { return channel == Channel::MW1 ? -1.0 : 1.0; }

Unitary3 lab_frame_propagator(const HamiltonianParams& params, Channel channel, double duration_s,
                              double drive_amplitude_hz, const IntegratorOptions& options) {
  if (options.steps_per_drive_period < kMinStepsPerDrivePeriod) {
    std::ostringstream msg;
    msg << "steps_per_drive_period = " << options.steps_per_drive_period << " < "
        << kMinStepsPerDrivePeriod << " would integrate inaccurately";
    throw IntegrationError(msg.str());
  }
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw ArgumentError("pulse duration must be finite and >= 0");
  }
  if (duration_s == 0.0) return Unitary3::identity();

  const double drive_hz = params.transition_frequency_hz(channel);
  const double omega = kTwoPi * drive_hz;
  const Matrix3 h0 = static_hamiltonian(params);
  const Matrix3 coupling =
      drive_sign(channel) * std::sqrt(2.0) * kTwoPi * drive_amplitude_hz * spin1_matrices().sy;

  const double periods = duration_s * drive_hz;
  const auto steps = static_cast<long long>(
      std::max(1.0, std::ceil(periods * options.steps_per_drive_period)));
  const double dt = duration_s / static_cast<double>(steps);

  auto h_at = [&](double t) -> Matrix3 { return h0 + std::cos(omega * t) * coupling; };

  // Gauss-Legendre nodes at 1/2 -+ sqrt(3)/6.
  const double node = std::sqrt(3.0) / 6.0;
  const Complex commutator_weight(0.0, -std::sqrt(3.0) / 12.0 * dt);

  Matrix3 u = Matrix3::Identity();
  for (long long k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    Matrix3 h_eff;
    if (options.scheme == StepScheme::Midpoint) {
      h_eff = h_at(t0 + 0.5 * dt);
    } else {
      const Matrix3 h1 = h_at(t0 + (0.5 - node) * dt);
      const Matrix3 h2 = h_at(t0 + (0.5 + node) * dt);
      h_eff = 0.5 * (h1 + h2) + commutator_weight * (h2 * h1 - h1 * h2);
    }
    u = hermitian_exponential(h_eff, dt).matrix() * u;
  }
  // Back to the interaction picture: exp(+i H0 T) U(T).
  const Matrix3 frame = hermitian_exponential(h0, -duration_s).matrix();
  return Unitary3::from_matrix(frame * u, 1e-8);
}

Unitary3 lab_frame_propagator(const HamiltonianParams& params, const PulseSegment& segment,
                              const IntegratorOptions& options) {
  params.validate();
  return lab_frame_propagator(params, segment.channel, segment.duration_s(params.rabi_frequency_hz),
                              params.rabi_frequency_hz, options);
}

double rwa_fidelity(const HamiltonianParams& params, const PulseSegment& segment,
                    const IntegratorOptions& options) {
  const auto zero = QutritState::basis(Level::Zero);
  const auto ideal = apply_unitary(rotation(segment.channel, segment.angle), zero);
  const auto full = apply_unitary(lab_frame_propagator(params, segment, options), zero);
  return std::min(1.0, std::norm(inner_product(ideal, full)));
}

double detuning_sigma_hz(double t2star_s) {
  if (!(t2star_s > 0.0)) throw ArgumentError("T2star must be > 0");
  if (std::isinf(t2star_s)) return 0.0;
  return std::sqrt(2.0) / (kTwoPi * t2star_s);
}

double sample_detuning(double t2star_s, std::uint64_t seed) {
  const double sigma = detuning_sigma_hz(t2star_s);
  if (sigma == 0.0) return 0.0;
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  return gauss(engine);
}

Matrix3 rotating_frame_hamiltonian(Channel channel, double rabi_frequency_hz, double detuning_hz) {
  // Half the Rabi rate couples the two levels; the sign is fixed so the
  // zero-detuning propagator reproduces rotation_r1 / rotation_r2 exactly.
  const double half = 0.5 * kTwoPi * rabi_frequency_hz;
  const Complex i(0.0, 1.0);
  Matrix3 h = Matrix3::Zero();
  if (channel == Channel::MW1) {
    h(1, 2) = i * half;
    h(2, 1) = -i * half;
    h(2, 2) = kTwoPi * detuning_hz;
  } else {
    h(0, 1) = -i * half;
    h(1, 0) = i * half;
    h(0, 0) = kTwoPi * detuning_hz;
  }
  return h;
}

Unitary3 detuned_rotation(Channel channel, double theta, double rabi_frequency_hz,
                          double detuning_hz) {
  const double duration = theta / (kTwoPi * rabi_frequency_hz);
  return hermitian_exponential(rotating_frame_hamiltonian(channel, rabi_frequency_hz, detuning_hz),
                               duration);
}

double dephased_fidelity(const PulseSchedule& schedule, double rabi_frequency_hz, double t2star_s,
                         int shots, std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("dephased_fidelity needs at least one shot");
  const auto zero = QutritState::basis(Level::Zero);
  const auto ideal = apply_unitary(schedule.propagator(), zero);
  double total = 0.0;
  for (int k = 0; k < shots; ++k) {
    const double delta = sample_detuning(t2star_s, derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    Unitary3 u = Unitary3::identity();
    for (const auto& s : schedule.segments) {
      u = compose(detuned_rotation(s.channel, s.angle, rabi_frequency_hz, delta), u);
    }
    total += std::norm(inner_product(ideal, apply_unitary(u, zero)));
  }
  return total / shots;
}

}  // namespace sorkin
