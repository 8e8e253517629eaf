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

#include <random>

#include "bridge.hpp"
#include "sorkin_lab/detection.hpp"
#include "sorkin_lab/errors.hpp"
#include "sorkin_lab/protocol.hpp"

namespace sorkin {
namespace {

using testing_bridge::max_diff;
using testing_bridge::to_oracle;

constexpr double kSqrt2 = std::numbers::sqrt2;

TEST(Measurement, KetMatchesClosedFormAndPresets) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(0, 4 * oracle::kPi);
  for (int k = 0; k < 500; ++k) {
    const double t1 = angle(rng), t2 = angle(rng);
    const auto m = measurement_ket({t1, t2});
    EXPECT_LT(max_diff(to_oracle(m), oracle::measurement_closed_form(t1, t2)), 1e-14);
  }
  const auto m1 = to_oracle(measurement_ket(MeasurementSpec::m1()));
  EXPECT_LT(max_diff(m1, {0.5, 0.5, 1 / kSqrt2}), 1e-15);
  const auto m2 = to_oracle(measurement_ket(MeasurementSpec::m2()));
  EXPECT_LT(max_diff(m2, {-0.5, -0.5, 1 / kSqrt2}), 1e-15);
}

TEST(Preparation, StatesMatchDefinitions) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const auto [a, b, c] = oracle::random_real_amplitudes(rng);
    const auto states = prepare_states({a, b, c});
    const auto expected = oracle::seven_states(a, b, c);
    for (int i = 0; i < 7; ++i) {
      EXPECT_LT(max_diff(to_oracle(states[i]), expected[i]), 1e-15);
      EXPECT_TRUE(states[i].is_normalized());
    }
  }
}

TEST(Preparation, DegenerateAmplitudesRejected) {
  EXPECT_THROW(prepare_states({1, 0, 0}), DegenerateProtocolError);
  EXPECT_THROW(prepare_states({0, 0, 1}), DegenerateProtocolError);
  EXPECT_THROW(prepare_states({0.5, 0.5, 0.5}), NormalizationError);
  EXPECT_NO_THROW(prepare_states({0, 1 / kSqrt2, 1 / kSqrt2}));
  EXPECT_THROW(solve_schedule({0, 1 / kSqrt2, 1 / kSqrt2}, 5e6), DegenerateProtocolError);
}

TEST(Protocol, ReferenceConfigurationExactValues) {
  const auto t = TargetAmplitudes::reference();
  const auto r = run_protocol_batch(t, MeasurementSpec::m1(), ProbabilityRule::born(), std::nullopt, 0);
  const double s = 2 * kSqrt2;
  const std::array<double, 7> expected{1.0 / 6, 0.0, (3 - s) / 8, (3 + s) / 8, 0.25, 0.25, 0.5};
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(r.p[i], expected[i], 1e-15) << i;
  EXPECT_NEAR(r.second_order.ab, -1.0 / 6, 1e-15);
  EXPECT_NEAR(r.second_order.ac, -kSqrt2 / 6, 1e-15);
  EXPECT_NEAR(r.second_order.bc, kSqrt2 / 6, 1e-15);
  EXPECT_NEAR(r.i2, 1.0 / 6 + kSqrt2 / 3, 1e-15);
  EXPECT_NEAR(r.i3, 0.0, 1e-15);
  EXPECT_NEAR(r.q_a, 1.0 / 12, 1e-15);
  EXPECT_EQ(r.provenance.mode, Provenance::Mode::Exact);
}

TEST(Protocol, SecondOrderTermsMatchPathAmplitudes) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0, 4 * oracle::kPi);
  for (int k = 0; k < 2000; ++k) {
    const auto [a, b, c] = oracle::random_real_amplitudes(rng);
    const double t1 = angle(rng), t2 = angle(rng);
    const auto m = oracle::measurement_closed_form(t1, t2);
    const auto p = oracle::born_probabilities(m, oracle::seven_states(a, b, c));
    ProbabilityVector pv;
    std::copy(p.begin(), p.end(), pv.begin());
    const auto terms = second_order_terms(pv, {a, b, c});
    const auto closed = oracle::pairwise_closed_form(m, a, b, c);
    EXPECT_NEAR(terms.ab, closed.ab, 1e-13);
    EXPECT_NEAR(terms.ac, closed.ac, 1e-13);
    EXPECT_NEAR(terms.bc, closed.bc, 1e-13);
    EXPECT_NEAR(third_order_term(pv, {a, b, c}), 0.0, 1e-13);
  }
}

TEST(Protocol, KappaFloor) {
  EXPECT_THROW(kappa(0.1, {0, 0, 0}), NotQuantumRegimeError);
  EXPECT_THROW(kappa(0.1, {1e-7, 0, 0}), NotQuantumRegimeError);
  EXPECT_NEAR(kappa(0.1, {0.1, -0.2, 0.2}), 0.2, 1e-15);
  EXPECT_NO_THROW(kappa(0.1, {1e-7, 0, 0}, 0.0));
  // The |0> measurement sees no interference at all.
  EXPECT_THROW(run_protocol_batch(TargetAmplitudes::reference(), {0.0, 0.0}, ProbabilityRule::born(),
                                  std::nullopt, 0),
               NotQuantumRegimeError);
}

TEST(Protocol, AffineInvarianceOfKappa) {
  const auto t = TargetAmplitudes::reference();
  const auto p = true_probabilities(t, MeasurementSpec::m1(), ProbabilityRule::additive_triple(0.3));
  const double k0 = analyze_probabilities(p, t).kappa;
  ASSERT_GT(std::abs(k0), 1e-3);
  for (double scale : {0.5, 2.0, 0.37})
    for (double shift : {0.0, 0.01, -0.2}) {
      ProbabilityVector q;
      for (int i = 0; i < 7; ++i) q[i] = scale * p[i] + shift;
      EXPECT_NEAR(analyze_probabilities(q, t).kappa, k0, 1e-12);
    }
}

TEST(Schedule, ReproducesPublishedTableUpToPermutation) {
  const auto plan = solve_schedule(TargetAmplitudes::reference(), 5e6);
  const auto published = preparation_angle_table();
  // Rows 2 and 3 of the published list are exchanged.
  const std::array<int, 7> row{0, 2, 1, 3, 4, 5, 6};
  for (int i = 0; i < 7; ++i) {
    const auto got = plan.angles(i);
    EXPECT_NEAR(got.mw1, published[row[i]].mw1, 1e-12) << i;
    EXPECT_NEAR(got.mw2, published[row[i]].mw2, 1e-12) << i;
  }
  EXPECT_NEAR(plan.angles(0).mw1, std::acos(1.0 / 3), 1e-12);
  EXPECT_NEAR(plan.schedules[6].duration_s(5e6), 100e-9, 1e-18);
}

TEST(Schedule, RoundTripThroughRotations) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 2000; ++k) {
    const auto [a, b, c] = oracle::random_real_amplitudes(rng, 1e-3);
    const auto plan = solve_schedule({a, b, c}, 5e6);
    const auto expected = oracle::seven_states(a, b, c);
    for (int i = 0; i < 7; ++i) {
      oracle::Mat u{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
      for (const auto& seg : plan.schedules[i].segments) {
        ASSERT_GE(seg.angle, 0.0);
        ASSERT_LT(seg.angle, 4 * oracle::kPi);
        u = oracle::mul(seg.channel == Channel::MW1 ? oracle::r1(seg.angle) : oracle::r2(seg.angle), u);
      }
      auto got = oracle::apply(u, oracle::zero_ket());
      for (auto& x : got) x *= plan.global_sign[i];
      ASSERT_LT(max_diff(got, expected[i]), 1e-9) << "state " << i + 1;
    }
  }
}

TEST(Sorkin, HierarchyOnFuzzedAmplitudes) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int k = 0; k < 1000; ++k) {
    std::array<Complex, 6> w;
    for (auto& x : w) x = Complex(g(rng), g(rng));
    EXPECT_NEAR(sorkin_term(2, w), 2 * std::real(w[0] * std::conj(w[1])), 1e-12);
    EXPECT_NEAR(sorkin_term(2, w), oracle::sorkin2(w[0], w[1]), 1e-12);
    EXPECT_NEAR(sorkin_term(3, w), 0.0, 1e-12);
    EXPECT_NEAR(oracle::sorkin3(w[0], w[1], w[2]), 0.0, 1e-12);
    EXPECT_NEAR(sorkin_term(4, w), 0.0, 1e-12);
    EXPECT_NEAR(sorkin_term(6, w), 0.0, 1e-11);
  }
  std::array<Complex, 2> two{1.0, 1.0};
  EXPECT_THROW(sorkin_term(3, two), ArgumentError);
  EXPECT_THROW(sorkin_term(1, two), ArgumentError);
}

}  // namespace
}  // namespace sorkin
