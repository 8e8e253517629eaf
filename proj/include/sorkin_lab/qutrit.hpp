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

#include <Eigen/Dense>

#include <complex>

namespace sorkin {

using Complex = std::complex<double>;
using Vector3 = Eigen::Vector3cd;
using Matrix3 = Eigen::Matrix3cd;

/// Tolerance for objects the library constructs (states, propagators).
inline constexpr double kConstructedTol = 1e-9;
/// Tolerance for pure algebraic identities.
inline constexpr double kIdentityTol = 1e-12;

/// Basis ordering is (|+1>, |0>, |-1>): the zero level is the SECOND
/// component, so the rotation matrices keep their textbook layout.
enum class Level : int { Plus = 0, Zero = 1, Minus = 2 };

inline constexpr int index_of(Level level) { return static_cast<int>(level); }

/// Three complex amplitudes. Not forced to be normalized: the deformation
/// rules and the generalized interference terms work on raw amplitudes too.
/// States prepared by the protocol are normalized within kConstructedTol.
class QutritState {
 public:
  QutritState() : amplitudes_(Vector3::Zero()) {}
  QutritState(Complex c_plus, Complex c_zero, Complex c_minus)
      : amplitudes_(c_plus, c_zero, c_minus) {}
  explicit QutritState(const Vector3& amplitudes) : amplitudes_(amplitudes) {}

  static QutritState basis(Level level);

  Complex c_plus() const { return amplitudes_(0); }
  Complex c_zero() const { return amplitudes_(1); }
  Complex c_minus() const { return amplitudes_(2); }
  Complex operator[](Level level) const { return amplitudes_(index_of(level)); }

  const Vector3& vector() const { return amplitudes_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(double tol = kConstructedTol) const;
  bool is_finite() const { return amplitudes_.allFinite(); }

  /// Throws NormalizationError for the zero vector.
  QutritState normalized() const;
  QutritState scaled(Complex factor) const { return QutritState(Vector3(amplitudes_ * factor)); }

 private:
  Vector3 amplitudes_;
};

/// sum_k conj(bra_k) ket_k
Complex inner_product(const QutritState& bra, const QutritState& ket);

/// Max entrywise modulus of the difference; equal within `tol`.
bool approx_equal(const QutritState& x, const QutritState& y, double tol);

/// 3x3 unitary. Construction validates U^dagger U = I, so every value of this
/// type in the program is a valid propagator.
class Unitary3 {
 public:
  static Unitary3 identity() { return Unitary3(Matrix3::Identity()); }

  /// Throws NonUnitaryError when max |(U^dagger U - I)_ij| > tol.
  static Unitary3 from_matrix(const Matrix3& m, double tol = kConstructedTol);

  const Matrix3& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Unitary3 adjoint() const { return Unitary3(m_.adjoint()); }

  /// max |(U^dagger U - I)_ij|
  double unitarity_defect() const { return unitarity_defect(m_); }
  static double unitarity_defect(const Matrix3& m);

 private:
  explicit Unitary3(const Matrix3& m) : m_(m) {}
  Matrix3 m_;
};

QutritState apply_unitary(const Unitary3& u, const QutritState& state);

/// Product with `earlier` acting first: later * earlier.
Unitary3 compose(const Unitary3& later, const Unitary3& earlier);

/// Rank-one measurement operator |m><m|.
class Projector {
 public:
  /// Throws NormalizationError unless `ket` is normalized.
  explicit Projector(const QutritState& ket);

  const QutritState& ket() const { return ket_; }
  Matrix3 matrix() const;
  /// <psi|M|psi>
  double expectation(const QutritState& psi) const;

 private:
  QutritState ket_;
};

struct Spin1Operators {
  Matrix3 sx;
  Matrix3 sy;
  Matrix3 sz;
};

/// Spin-1 matrices in the (|+1>, |0>, |-1>) basis with hbar = 1.
const Spin1Operators& spin1_matrices();

}  // namespace sorkin
