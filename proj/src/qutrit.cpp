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

#include "sorkin_lab/qutrit.hpp"

#include <cmath>
#include <sstream>

#include "sorkin_lab/errors.hpp"

namespace sorkin {

QutritState QutritState::basis(Level level) {
  Vector3 v = Vector3::Zero();
  v(index_of(level)) = 1.0;
  return QutritState(v);
}

bool QutritState::is_normalized(double tol) const {
  return is_finite() && std::abs(norm_squared() - 1.0) <= tol;
}

QutritState QutritState::normalized() const {
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NormalizationError("cannot normalize a zero or non-finite state");
  }
  return QutritState(Vector3(amplitudes_ / n));
}

Complex inner_product(const QutritState& bra, const QutritState& ket) {
  // Eigen's dot() conjugates the left operand.
  return bra.vector().dot(ket.vector());
}

bool approx_equal(const QutritState& x, const QutritState& y, double tol) {
  return (x.vector() - y.vector()).cwiseAbs().maxCoeff() <= tol;
}

double Unitary3::unitarity_defect(const Matrix3& m) {
  return (m.adjoint() * m - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

Unitary3 Unitary3::from_matrix(const Matrix3& m, double tol) {
  if (!m.allFinite()) {
    throw NonUnitaryError("matrix has non-finite entries");
  }
  const double defect = unitarity_defect(m);
  if (defect > tol) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max |U^dagger U - I| = " << defect << " > " << tol;
    throw NonUnitaryError(msg.str());
  }
  return Unitary3(m);
}

QutritState apply_unitary(const Unitary3& u, const QutritState& state) {
  return QutritState(Vector3(u.matrix() * state.vector()));
}

Unitary3 compose(const Unitary3& later, const Unitary3& earlier) {
  return Unitary3::from_matrix(later.matrix() * earlier.matrix(), 2.0 * kConstructedTol);
}

Projector::Projector(const QutritState& ket) : ket_(ket) {
  if (!ket.is_normalized()) {
    throw NormalizationError("projector ket must be normalized");
  }
}

Matrix3 Projector::matrix() const { return ket_.vector() * ket_.vector().adjoint(); }

double Projector::expectation(const QutritState& psi) const {
  return std::norm(inner_product(ket_, psi));
}

const Spin1Operators& spin1_matrices() {
  static const Spin1Operators ops = [] {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    Spin1Operators s;
    s.sz = Matrix3::Zero();
    s.sz(0, 0) = 1.0;
    s.sz(2, 2) = -1.0;
    s.sx = Matrix3::Zero();
    s.sx(0, 1) = s.sx(1, 0) = s.sx(1, 2) = s.sx(2, 1) = r;
    s.sy = Matrix3::Zero();
    s.sy(0, 1) = -i * r;
    s.sy(1, 0) = i * r;
    s.sy(1, 2) = -i * r;
    s.sy(2, 1) = i * r;
    return s;
  }();
  return ops;
}

}  // namespace sorkin
