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

#include <ostream>
#include <string>
#include <vector>

#include "rpitrack/model/closed_loop.h"
#include "rpitrack/model/plant.h"
#include "rpitrack/polyhedra/polyhedron.h"

namespace rpitrack::certify {

inline constexpr double kEqualityTol = 1e-7;
inline constexpr double kInclusionTol = 1e-7;
inline constexpr double kHurwitzMargin = 1e-6;
inline constexpr double kGammaMin = 1e-6;

/// {x_cl : l_cl x_cl <= 1} with columns ordered (x, x_I1, x_I2).
struct InvariantSet {
  Matrix l_cl;

  Eigen::Index rows() const { return l_cl.rows(); }
  Eigen::Index n_cl() const { return l_cl.cols(); }
  polyhedra::Polyhedron AsPolyhedron() const;

  /// Throws DimensionMismatch unless rows > n_cl, RankDeficient unless l_cl
  /// has full column rank, and Unbounded if the set is unbounded.
  void Validate() const;
};

/// Multipliers and data of an invariance and admissibility certificate.
///
/// `t` stacks the state-inclusion blocks [T1; T2; T3] with l_x, 2 and 2 rows.
struct Certificate {
  model::ControllerGains gains;
  InvariantSet inv;
  Matrix h;    // l x l, Metzler
  Matrix h_r;  // l x 2
  Matrix t;    // (l_x + 4) x l
  Matrix q;    // l_u x l
  Matrix q_r;  // l_u x 2
  Matrix v;    // n_cl x l
  double gamma = 0.0;
  model::IntegralBounds xi;
  Vector rho = Vector::Zero(2);

  Eigen::Index l() const { return inv.rows(); }
  Eigen::Index l_x() const { return t.rows() - 4; }
  auto t1() const { return t.topRows(t.rows() - 4); }
  auto t2() const { return t.middleRows(t.rows() - 4, 2); }
  auto t3() const { return t.bottomRows(2); }
};

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;

  bool passed() const { return value <= tolerance; }
};

struct CertReport {
  bool passed = false;
  std::vector<Residual> residuals;

  /// Throws std::out_of_range for an unknown name.
  const Residual& Find(const std::string& name) const;
  double Value(const std::string& name) const { return Find(name).value; }

  /// Aligned table, one residual per line, then a PASS/FAIL line.
  void WriteTable(std::ostream& os) const;
  /// name = value lines plus `passed = true|false`.
  void WriteKeyValue(std::ostream& os) const;
};

/// Residual names in report order.
///   rpi_x, rpi_xi1, rpi_xi2, rpi_ref      H L_cl = L_cl A_cl, H_r R = L_cl B_cl
///   rpi_decay                             H 1 + H_r rho <= -gamma 1
///   rank_identity                         V L_cl = I
///   state_map, state_offset_x,
///   state_offset_xi1, state_offset_xi2    T L_cl = X_cl, T_i 1 <= 1
///   input_map_x, input_map_xi1,
///   input_map_xi2, input_map_ref,
///   input_offset                          Q L_cl = U [K C, K_I1, K_I2],
///                                         Q_r R = U K_r, Q 1 + Q_r rho <= 1
///   h_metzler, h_r_nonneg, t_nonneg,
///   q_nonneg, q_r_nonneg, xi_nonneg,
///   rho_nonneg, gamma_positive            sign conditions
///   hurwitz                               A_cl stable with margin 1e-6
const std::vector<std::string>& ResidualNames();

/// Evaluates every relation of the certificate at `tol` (equalities,
/// inclusions and sign conditions). gamma must reach kGammaMin. The
/// reference class supplies alpha; the certified bounds come from cert.rho.
///
/// Throws DimensionMismatch for inconsistent shapes only.
CertReport CheckCertificate(const Certificate& cert,
                            const model::PlantModel& plant,
                            const model::StateConstraint& xc,
                            const model::InputConstraint& uc,
                            const model::ReferenceClass& ref,
                            double tol = kEqualityTol);

/// Largest shift s with every eigenvalue real part <= -s, by bisection on
/// the Routh test.
double StabilityMargin(const Matrix& a);

}  // namespace rpitrack::certify
