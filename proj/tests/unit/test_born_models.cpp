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
#include "sorkin_lab/born_models.hpp"
#include "sorkin_lab/detection.hpp"
#include "sorkin_lab/errors.hpp"

namespace sorkin {
namespace {

using testing_bridge::from_oracle;

TEST(ProbabilityRule, BornIsSquaredOverlap) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto m = oracle::random_state(rng);
    const auto psi = oracle::random_state(rng);
    EXPECT_NEAR(probability(ProbabilityRule::born(), from_oracle(m), from_oracle(psi)),
                std::norm(oracle::dot(m, psi)), 1e-15);
  }
}

TEST(ProbabilityRule, RequiresNormalizedInputs) {
  const auto ok = QutritState::basis(Level::Zero);
  const QutritState bad(1.0, 1.0, 0.0);
  EXPECT_THROW(probability(ProbabilityRule::born(), bad, ok), NormalizationError);
  EXPECT_THROW(probability(ProbabilityRule::born(), ok, bad), NormalizationError);
}

TEST(ProbabilityRule, ExponentDeformationIdentities) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const auto m = from_oracle(oracle::random_state(rng));
    const auto psi = from_oracle(oracle::random_state(rng));
    const double born = probability(ProbabilityRule::born(), m, psi);
    EXPECT_NEAR(probability(ProbabilityRule::exponent_deformed(0.0), m, psi), born, 1e-15);
    for (double eps : {-0.5, 0.1, 0.7}) {
      EXPECT_NEAR(probability(ProbabilityRule::exponent_deformed(eps), m, psi),
                  std::pow(born, 1 + eps / 2), 1e-13);
    }
  }
  EXPECT_THROW(ProbabilityRule::exponent_deformed(-2.5), ArgumentError);
}

TEST(ProbabilityRule, TripleTermTouchesOnlyThreePathStates) {
  const auto t = TargetAmplitudes::reference();
  const auto m = measurement_ket(MeasurementSpec::m1());
  const auto states = prepare_states(t);
  const auto rule = ProbabilityRule::additive_triple(0.1);
  for (int i = 1; i < 7; ++i) {
    EXPECT_NEAR(probability(rule, m, states[i]), probability(ProbabilityRule::born(), m, states[i]),
                1e-15);
  }
  // 2 eps w_a w_b w_c with real weights (1/2)(1/sqrt3), (1/2)(-1/sqrt3), (1/sqrt2)(-1/sqrt3).
  const double cubic = 2 * 0.1 * (0.5 / std::sqrt(3.0)) * (-0.5 / std::sqrt(3.0)) *
                       (-1 / std::sqrt(6.0));
  EXPECT_NEAR(probability(rule, m, states[0]), 1.0 / 6 + cubic, 1e-15);
  EXPECT_NEAR(probability(rule, m, states[0]), 0.173471, 5e-7);
}

TEST(ProbabilityRule, TripleRejectsUnphysicalValues) {
  const auto t = TargetAmplitudes::reference();
  const auto m = measurement_ket(MeasurementSpec::m1());
  const auto psi = prepare_states(t)[0];
  EXPECT_THROW(probability(ProbabilityRule::additive_triple(-10.0), m, psi), UnphysicalParameterError);
  EXPECT_THROW(probability(ProbabilityRule::additive_triple(50.0), m, psi), UnphysicalParameterError);
}

TEST(ProbabilityRule, ParseAndLabelRoundTrip) {
  for (const char* text : {"born", "exponent:0.1", "triple:0.05", "triple:-0.02"}) {
    const auto r = ProbabilityRule::parse(text);
    EXPECT_EQ(ProbabilityRule::parse(r.label()).kind(), r.kind());
    EXPECT_EQ(ProbabilityRule::parse(r.label()).epsilon(), r.epsilon());
  }
  EXPECT_EQ(ProbabilityRule::parse("triple:0.25").epsilon(), 0.25);
  EXPECT_TRUE(ProbabilityRule::parse("born").is_born());
  EXPECT_THROW(ProbabilityRule::parse("quadratic"), ArgumentError);
  EXPECT_THROW(ProbabilityRule::parse("triple:x"), ArgumentError);
  EXPECT_NE(ProbabilityRule::additive_triple(0.1).description().find("synthetic"), std::string::npos);
}

TEST(Deformations, TripleKappaIsLinear) {
  const auto t = TargetAmplitudes::reference();
  for (double eps : {-0.05, 0.01, 0.1, 0.2}) {
    const auto r = run_protocol_batch(t, MeasurementSpec::m1(), ProbabilityRule::additive_triple(eps),
                                      std::nullopt, 0);
    // slope = 2 (w_a w_b w_c) / I2, all by hand.
    const double i2 = 1.0 / 6 + std::sqrt(2.0) / 3;
    const double slope = 2 * (1.0 / 12) * (1 / std::sqrt(6.0)) / i2;
    EXPECT_NEAR(r.kappa, slope * eps, 1e-14);
  }
}

TEST(Deformations, ExponentKappaMatchesOracle) {
  const auto t = TargetAmplitudes::reference();
  const auto m = oracle::measurement_closed_form(oracle::kPi / 2, oracle::kPi / 2);
  const auto born = oracle::born_probabilities(m, oracle::seven_states(t.a, t.b, t.c));
  const double eps = 0.1;
  std::array<double, 7> p;
  for (int i = 0; i < 7; ++i) p[i] = std::pow(born[i], 1 + eps / 2);
  const double a2 = t.a * t.a, b2 = t.b * t.b, c2 = t.c * t.c;
  const double i3 = p[0] - (a2 + b2) * p[1] - (a2 + c2) * p[2] - (b2 + c2) * p[3] + a2 * p[4] +
                    b2 * p[5] + c2 * p[6];
  const auto r = run_protocol_batch(t, MeasurementSpec::m1(), ProbabilityRule::exponent_deformed(eps),
                                    std::nullopt, 0);
  EXPECT_NEAR(r.i3, i3, 1e-14);
  EXPECT_NEAR(r.i3, -0.020991, 1e-6);
}

TEST(Deformations, ExponentKappaMagnitudeGrowsWithEpsilon) {
  const auto t = TargetAmplitudes::reference();
  double previous = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double eps = 0.02 * k;
    const double kap = run_protocol_batch(t, MeasurementSpec::m1(),
                                          ProbabilityRule::exponent_deformed(eps), std::nullopt, 0)
                           .kappa;
    EXPECT_GT(std::abs(kap), previous);
    previous = std::abs(kap);
  }
}

TEST(Deformations, BornNullOnRandomConfigurations) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> angle(0, 4 * oracle::kPi);
  for (int k = 0; k < 2000; ++k) {
    const auto [a, b, c] = oracle::random_real_amplitudes(rng);
    const auto p = true_probabilities({a, b, c}, {angle(rng), angle(rng)}, ProbabilityRule::born());
    EXPECT_NEAR(third_order_term(p, {a, b, c}), 0.0, 1e-13);
  }
}

}  // namespace
}  // namespace sorkin
