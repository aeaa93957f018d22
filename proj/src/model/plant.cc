// Copyright 2026 The rpitrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "rpitrack/model/plant.h"

#include <cmath>
#include <string>

#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"

namespace rpitrack::model {

PlantModel::PlantModel(Matrix a, Matrix b, Matrix c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  const Eigen::Index n = a_.rows();
  if (n < 1 || a_.cols() != n) {
    throw DimensionMismatch("PlantModel: A must be square and non-empty");
  }
  if (b_.rows() != n || b_.cols() < 1) {
    throw DimensionMismatch("PlantModel: B must have n rows");
  }
  if (c_.cols() != n || c_.rows() < 1) {
    throw DimensionMismatch("PlantModel: C must have n columns");
  }
  numlin::RequireFinite(a_, "PlantModel A");
  numlin::RequireFinite(b_, "PlantModel B");
  numlin::RequireFinite(c_, "PlantModel C");
  if (c_.rows() != 1) {
    throw InvalidModel("PlantModel: the output must be scalar (C has " +
                       std::to_string(c_.rows()) + " rows)");
  }
  Matrix ctrb(n, n * m());
  Matrix block = b_;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * m(), m()) = block;
    block = a_ * block;
  }
  if (numlin::NumericalRank(ctrb, kKalmanRankTol) < n) {
    throw InvalidModel("PlantModel: (A, B) is not controllable");
  }
  Matrix obsv(n, n);
  RowVector row = c_;
  for (Eigen::Index k = 0; k < n; ++k) {
    obsv.row(k) = row;
    row = row * a_;
  }
  if (numlin::NumericalRank(obsv, kKalmanRankTol) < n) {
    throw InvalidModel("PlantModel: (C, A) is not observable");
  }
}

StateConstraint StateConstraint::FromBox(const Vector& lower,
                                         const Vector& upper) {
  if (lower.size() != upper.size()) {
    throw DimensionMismatch("StateConstraint::FromBox: bound lengths differ");
  }
  const Eigen::Index n = lower.size();
  Matrix rows = Matrix::Zero(2 * n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(lower[j] < 0.0 && upper[j] > 0.0)) {
      throw DimensionMismatch(
          "StateConstraint::FromBox: bounds must straddle the origin");
    }
    if (std::isfinite(upper[j])) rows(k++, j) = 1.0 / upper[j];
    if (std::isfinite(lower[j])) rows(k++, j) = 1.0 / lower[j];
  }
  return StateConstraint{rows.topRows(k)};
}

void StateConstraint::Validate(Eigen::Index n) const {
  if (x_mat.rows() < 1 || x_mat.cols() != n) {
    throw DimensionMismatch("StateConstraint: X must have n columns");
  }
  numlin::RequireFinite(x_mat, "StateConstraint X");
}

InputConstraint InputConstraint::Symmetric(const Vector& bound) {
  const Eigen::Index m = bound.size();
  Matrix rows = Matrix::Zero(2 * m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!(bound[j] > 0.0)) {
      throw DimensionMismatch("InputConstraint::Symmetric: bound must be > 0");
    }
    rows(2 * j, j) = 1.0 / bound[j];
    rows(2 * j + 1, j) = -1.0 / bound[j];
  }
  return InputConstraint{rows};
}

void InputConstraint::Validate(Eigen::Index m) const {
  if (u_mat.rows() < 1 || u_mat.cols() != m) {
    throw DimensionMismatch("InputConstraint: U must have m columns");
  }
  numlin::RequireFinite(u_mat, "InputConstraint U");
}

ReferenceClass ReferenceClass::Ramp(const Vector& rho) {
  ReferenceClass r;
  r.rho = rho;
  r.Validate();
  return r;
}

ReferenceClass ReferenceClass::Sinusoid(double omega, const Vector& rho) {
  ReferenceClass r;
  r.omega = omega;
  r.alpha = omega * omega;
  r.rho = rho;
  r.Validate();
  return r;
}

Matrix ReferenceClass::RMat() {
  Matrix r(2, 1);
  r << 1.0, -1.0;
  return r;
}

void ReferenceClass::Validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(omega) || alpha < 0.0 ||
      omega < 0.0) {
    throw DimensionMismatch("ReferenceClass: alpha and omega must be finite, >= 0");
  }
  if (omega > 0.0 && std::abs(alpha - omega * omega) > 1e-12 * (1.0 + alpha)) {
    throw DimensionMismatch("ReferenceClass: alpha must equal omega^2");
  }
  if (omega == 0.0 && alpha != 0.0) {
    throw DimensionMismatch("ReferenceClass: alpha > 0 requires omega");
  }
  if (rho.size() != 2 || !rho.allFinite() || !(rho.array() > 0.0).all()) {
    throw DimensionMismatch("ReferenceClass: rho must be two positive numbers");
  }
}

ControllerGains ControllerGains::Zero(Eigen::Index m) {
  return ControllerGains{Vector::Zero(m), Vector::Zero(m), Vector::Zero(m),
                         Vector::Zero(m)};
}

ControllerGains ControllerGains::Scalar(double k, double k_i1, double k_i2,
                                        double k_r) {
  return ControllerGains{Vector::Constant(1, k), Vector::Constant(1, k_i1),
                         Vector::Constant(1, k_i2), Vector::Constant(1, k_r)};
}

void ControllerGains::Validate(Eigen::Index m) const {
  if (k.size() != m || k_i1.size() != m || k_i2.size() != m ||
      k_r.size() != m) {
    throw DimensionMismatch("ControllerGains: every gain must have m entries");
  }
  if (!k.allFinite() || !k_i1.allFinite() || !k_i2.allFinite() ||
      !k_r.allFinite()) {
    throw DimensionMismatch("ControllerGains: non-finite gain");
  }
}

Vector ControllerGains::Stacked() const {
  Vector s(4 * k.size());
  s << k, k_i1, k_i2, k_r;
  return s;
}

Matrix IntegralBounds::AsMatrix() const {
  Matrix x = Matrix::Zero(4, 2);
  x(0, 0) = x_i11;
  x(1, 0) = -x_i21;
  x(2, 1) = x_i12;
  x(3, 1) = -x_i22;
  return x;
}

Vector IntegralBounds::Signed() const {
  Vector v(4);
  v << x_i11, -x_i21, x_i12, -x_i22;
  return v;
}

void IntegralBounds::Validate() const {
  for (double v : {x_i11, x_i21, x_i12, x_i22}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DimensionMismatch("IntegralBounds: entries must be finite and > 0");
    }
  }
}

}  // namespace rpitrack::model
