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
#pragma once

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::model {

inline constexpr double kKalmanRankTol = 1e-8;

/// Continuous LTI plant xdot = A x + B u, y = C x with a scalar output.
class PlantModel {
 public:
  /// Throws DimensionMismatch for inconsistent shapes and InvalidModel for a
  /// multi-output C, an uncontrollable (A, B) or an unobservable (C, A).
  PlantModel(Matrix a, Matrix b, Matrix c);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index m() const { return b_.cols(); }

 private:
  Matrix a_, b_, c_;
};

/// X x <= 1.
struct StateConstraint {
  Matrix x_mat;

  /// Box lower <= x <= upper with lower < 0 < upper, as one row per finite
  /// bound (upper rows first, then lower rows, per coordinate).
  static StateConstraint FromBox(const Vector& lower, const Vector& upper);
  void Validate(Eigen::Index n) const;
};

/// U u <= 1.
struct InputConstraint {
  Matrix u_mat;

  /// |u_i| <= bound_i.
  static InputConstraint Symmetric(const Vector& bound);
  void Validate(Eigen::Index m) const;
};

enum class ReferenceKind { kRamp, kSinusoid };

/// Exosystem rddot + alpha r = 0 with the bounding set R r <= rho,
/// R = [1; -1].
struct ReferenceClass {
  double alpha = 0.0;
  double omega = 0.0;
  Vector rho = Vector::Constant(2, 1e-2);

  static ReferenceClass Ramp(const Vector& rho);
  static ReferenceClass Sinusoid(double omega, const Vector& rho);
  static Matrix RMat();

  ReferenceKind kind() const {
    return omega > 0.0 ? ReferenceKind::kSinusoid : ReferenceKind::kRamp;
  }
  /// Throws DimensionMismatch unless alpha = omega^2 >= 0 and rho > 0.
  void Validate() const;
};

/// u = K y + K_I1 x_I1 + K_I2 x_I2 + K_r r, each a column of length m.
struct ControllerGains {
  Vector k, k_i1, k_i2, k_r;

  static ControllerGains Zero(Eigen::Index m);
  /// Scalar-input convenience.
  static ControllerGains Scalar(double k, double k_i1, double k_i2, double k_r);
  void Validate(Eigen::Index m) const;
  /// [K; K_I1; K_I2; K_r] stacked.
  Vector Stacked() const;
};

/// Integral-state bounds -1/x_i21 <= x_I1 <= 1/x_i11 and
/// -1/x_i22 <= x_I2 <= 1/x_i12.
struct IntegralBounds {
  double x_i11 = 1e-3;
  double x_i21 = 1e-3;
  double x_i12 = 1e-3;
  double x_i22 = 1e-3;

  /// The 4x2 matrix [x_i11 0; -x_i21 0; 0 x_i12; 0 -x_i22].
  Matrix AsMatrix() const;
  /// Column entries in row order: (x_i11, -x_i21, x_i12, -x_i22).
  Vector Signed() const;
  double Sum() const { return x_i11 + x_i21 + x_i12 + x_i22; }
  void Validate() const;
};

}  // namespace rpitrack::model
