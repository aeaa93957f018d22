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

#include <optional>
#include <vector>

#include "rpitrack/certify/certificate.h"
#include "rpitrack/numlin/lp.h"

namespace rpitrack::certify {

struct VarBox {
  double lo;
  double hi;
};

/// Element-wise bounds on every certificate variable group.
struct VariableBoxes {
  VarBox h_offdiag{0.0, 100.0};
  VarBox h_diag{-100.0, 100.0};
  VarBox h_r{0.0, 100.0};
  VarBox t{0.0, 100.0};
  VarBox q{0.0, 100.0};
  VarBox q_r{0.0, 100.0};
  VarBox l{-100.0, 100.0};
  VarBox gains{-100.0, 100.0};
  VarBox xi{1e-3, 0.1};
  VarBox gamma{kGammaMin, 100.0};
  double v_abs = 1000.0;
};

inline constexpr double kEqualitySlack = 1e-9;

/// LP over (H, H_r, T, Q, Q_r, gamma) for a fixed invariant set and rho,
/// optionally also over the gains and the integral bounds. Every relation
/// of a certificate is linear in these once L_cl is fixed; equalities are
/// relaxed by +-eq_slack.
struct MultiplierLp {
  const model::PlantModel* plant = nullptr;
  const model::StateConstraint* xc = nullptr;
  const model::InputConstraint* uc = nullptr;
  double alpha = 0.0;
  Matrix l_cl;
  Vector rho;
  std::optional<model::ControllerGains> fixed_gains;  // nullopt: gains free
  std::optional<model::IntegralBounds> fixed_xi;       // nullopt: X_I free
  VariableBoxes boxes;
  double gamma_weight = 1.0;  // maximized
  double xi_weight = 0.0;     // maximized weight on the X_I sum
  double eq_slack = kEqualitySlack;
};

struct MultiplierLpResult {
  numlin::LpStatus status = numlin::LpStatus::kInfeasible;
  std::optional<Certificate> cert;  // present iff status is optimal
};

/// Solves the LP; V is filled with the left inverse of L_cl. Throws
/// DimensionMismatch for inconsistent data, RankDeficient if L_cl has no
/// left inverse, and NumericalBreakdown from the simplex.
MultiplierLpResult SolveMultiplierLp(const MultiplierLp& lp);

/// Unit gain vectors: for each input j, e_j placed in K, K_I1, K_I2, K_r in
/// that order. Closed-loop data is affine in these coordinates.
std::vector<model::ControllerGains> GainBasis(Eigen::Index m);

/// Inverse of GainBasis: coefficients to gains.
model::ControllerGains GainsFromCoefficients(const Vector& coef, Eigen::Index m);

}  // namespace rpitrack::certify
