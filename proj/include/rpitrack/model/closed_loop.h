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

#include <cstdint>

#include "rpitrack/model/plant.h"
#include "rpitrack/polyhedra/polyhedron.h"

namespace rpitrack::model {

/// xcl' = a_cl xcl + b_cl r with xcl = (x, x_I1, x_I2).
struct ClosedLoop {
  Matrix a_cl;
  Matrix b_cl;

  Eigen::Index n_cl() const { return a_cl.rows(); }
};

/// a_cl = [A + B K C, B K_I1, B K_I2; -C, 0, -alpha; 0, 1, 0],
/// b_cl = [B K_r; 1; 0].
ClosedLoop BuildClosedLoop(const PlantModel& plant, const ControllerGains& gains,
                           const ReferenceClass& ref);

/// Recovers the gains and alpha from a closed loop built on `plant`.
/// The gain blocks are recovered by least squares against B.
struct DecomposedLoop {
  ControllerGains gains;
  double alpha;
};
DecomposedLoop DecomposeClosedLoop(const ClosedLoop& cl, const PlantModel& plant);

/// True iff rank [A - s I, B; C, 0] = n + 1 at every root s of
/// s^2 + alpha = 0. Complex roots use the real doubled pencil.
bool TransmissionZeroCheck(const PlantModel& plant, const ReferenceClass& ref,
                           double tol);

/// X_cl = blockdiag(X, X_I) with unit offsets, ambient dimension n + 2.
polyhedra::Polyhedron StackStateConstraints(const StateConstraint& xc,
                                            const IntegralBounds& xi);

/// [K C, K_I1, K_I2, K_r], m x (n_cl + 1).
Matrix InputConstraintMap(const ControllerGains& gains, const PlantModel& plant);

struct ProblemDims {
  std::int64_t n = 1;
  std::int64_t m = 1;
  std::int64_t l = 1;
  std::int64_t l_r = 2;
  std::int64_t l_x = 1;
  std::int64_t l_xi1 = 2;
  std::int64_t l_xi2 = 2;
  std::int64_t l_u = 1;
};

struct ProblemCounts {
  std::int64_t num_variables;
  std::int64_t num_equalities;
  std::int64_t num_inequalities;

  bool operator==(const ProblemCounts&) const = default;
};

/// Size of the bilinear design program:
///   vars   = m + l (n_cl + l + l_r + l_x + l_xi1 + l_xi2 + l_u)
///            + 2 (l_u + 2) + n_cl^2 + 1
///   eqs    = n_cl (l + l_x + l_xi1 + l_xi2 + l_u + n_cl) + 2 (l + l_u)
///   ineqs  = l + l_x + l_xi1 + l_xi2 + l_u
/// Throws DimensionMismatch if any dimension is below 1.
ProblemCounts ProblemSize(const ProblemDims& dims);

}  // namespace rpitrack::model
