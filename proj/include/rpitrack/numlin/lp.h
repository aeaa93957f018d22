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

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::numlin {

/// minimize cost'x  s.t.  eq_lhs x = eq_rhs,  ineq_lhs x <= ineq_rhs,
///                        var_lower <= x <= var_upper.
/// Either constraint block may have zero rows; bounds may be infinite.
struct LpProblem {
  Vector cost;
  Matrix eq_lhs;
  Vector eq_rhs;
  Matrix ineq_lhs;
  Vector ineq_rhs;
  Vector var_lower;
  Vector var_upper;

  Eigen::Index num_vars() const { return cost.size(); }

  /// Throws DimensionMismatch when the blocks disagree, when a coefficient is
  /// non-finite, or when a lower bound exceeds its upper bound.
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* ToString(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<Vector> solution;  // present iff kOptimal
  std::optional<double> objective;  // present iff kOptimal
  int iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

inline constexpr double kDefaultFeasTol = 1e-8;

/// Dense two-phase bounded-variable primal simplex.
///
/// Pricing is Dantzig's rule with a Harris-style two-pass ratio test; after a
/// streak of degenerate pivots the solver switches to Bland's rule until it
/// makes progress again. The basis is refactorized periodically from the
/// original (row-equilibrated) data. Identical inputs give identical outputs.
///
/// Throws DimensionMismatch for a malformed problem and NumericalBreakdown if
/// the iteration cap is hit or the final basis cannot be made feasible to
/// `feas_tol`.
LpOutcome SolveLp(const LpProblem& problem, double feas_tol = kDefaultFeasTol);

/// Largest violation of any row or bound of `problem` at `x`.
double PrimalResidual(const LpProblem& problem, const Vector& x);

}  // namespace rpitrack::numlin
