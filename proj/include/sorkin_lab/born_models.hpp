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

#include <string>
#include <string_view>

#include "sorkin_lab/qutrit.hpp"

namespace sorkin {

/// Outcome-probability law mapping (measurement ket, state) to a probability.
///
/// The two deformations are synthetic violation models used to measure how
/// sensitive the seven-experiment protocol is; they are not physical
/// predictions. Both are deliberately unnormalized over a basis: only ratios
/// and affine combinations of probabilities ever reach kappa.
class ProbabilityRule {
 public:
  enum class Kind { Born, ExponentDeformed, AdditiveTriple };

  ProbabilityRule() = default;

  static ProbabilityRule born() { return {}; }
  /// |<m|psi>|^(2 + epsilon)
  static ProbabilityRule exponent_deformed(double epsilon);
  /// |w_a + w_b + w_c|^2 + 2 epsilon Re(w_a conj(w_b) w_c), w_k = conj(m_k) psi_k.
  /// The cubic term vanishes unless all three paths are open, so it perturbs
  /// only the three-path experiment.
  static ProbabilityRule additive_triple(double epsilon);

  /// Parses `born`, `exponent:<eps>` or `triple:<eps>`. Throws ArgumentError.
  static ProbabilityRule parse(std::string_view text);

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  bool is_born() const { return kind_ == Kind::Born; }

  /// Round-trips through parse().
  std::string label() const;
  /// Short human description, tagging deformations as synthetic.
  std::string description() const;

 private:
  ProbabilityRule(Kind kind, double epsilon) : kind_(kind), epsilon_(epsilon) {}

  Kind kind_ = Kind::Born;
  double epsilon_ = 0.0;
};

/// Outcome probability of measuring |m> on |psi> under `rule`.
/// Throws NormalizationError for unnormalized inputs and
/// UnphysicalParameterError when AdditiveTriple leaves [0, 1].
double probability(const ProbabilityRule& rule, const QutritState& m, const QutritState& psi);

}  // namespace sorkin
