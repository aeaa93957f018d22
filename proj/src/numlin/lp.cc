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

#include "rpitrack/numlin/lp.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <string>
#include <vector>

#include "rpitrack/errors.h"

namespace rpitrack::numlin {

void LpProblem::Validate() const {
  const Eigen::Index n = cost.size();
  auto fail = [](const std::string& what) {
    throw DimensionMismatch("LpProblem: " + what);
  };
  if (n == 0) fail("no variables");
  if (eq_lhs.cols() != n && eq_lhs.rows() > 0) fail("eq_lhs column count");
  if (ineq_lhs.cols() != n && ineq_lhs.rows() > 0) fail("ineq_lhs column count");
  if (eq_lhs.rows() != eq_rhs.size()) fail("eq_rhs length");
  if (ineq_lhs.rows() != ineq_rhs.size()) fail("ineq_rhs length");
  if (var_lower.size() != n || var_upper.size() != n) fail("bound length");
  if (!cost.allFinite() || !eq_lhs.allFinite() || !eq_rhs.allFinite() ||
      !ineq_lhs.allFinite() || !ineq_rhs.allFinite()) {
    fail("non-finite coefficient");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(var_lower[j]) || std::isnan(var_upper[j])) fail("NaN bound");
    if (var_lower[j] > var_upper[j]) {
      fail("var_lower > var_upper at " + std::to_string(j));
    }
    if (var_lower[j] == kInf || var_upper[j] == -kInf) fail("empty bound");
  }
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

double PrimalResidual(const LpProblem& problem, const Vector& x) {
  double worst = 0.0;
  if (problem.eq_lhs.rows() > 0) {
    worst = std::max(worst, MaxAbs(problem.eq_lhs * x - problem.eq_rhs));
  }
  if (problem.ineq_lhs.rows() > 0) {
    worst = std::max(
        worst, (problem.ineq_lhs * x - problem.ineq_rhs).maxCoeff());
  }
  worst = std::max(worst, (problem.var_lower - x).maxCoeff());
  worst = std::max(worst, (x - problem.var_upper).maxCoeff());
  return worst;
}

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

constexpr double kHarrisTol = 1e-11;
constexpr int kDegenerateStreak = 50;
// Smallest pivot accepted when exchanging a leftover artificial; smaller
// pivots amplify rounding, so the artificial stays basic at zero instead.
constexpr double kDriveOutPivot = 1e-4;

// Pivot tolerance and refactorization period. A breakdown under one
// setting is retried under the next, stricter one.
// A pivot smaller than rel_pivot times the largest entry of its column
// sets the entering column aside until the next basis change.
struct Stability {
  double pivot_tol;
  double rel_pivot;
  int refactor_every;
};
constexpr Stability kStabilityLadder[] = {
    {1e-9, 1e-7, 64}, {1e-9, 1e-5, 16}, {1e-7, 1e-3, 4}};

class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& p, double feas_tol, Stability stability)
      : problem_(p),
        feas_tol_(feas_tol),
        pivot_tol_(stability.pivot_tol),
        rel_pivot_(stability.rel_pivot),
        refactor_every_(stability.refactor_every) {}

  LpOutcome Run();

 private:
  enum class IterResult { kOptimal, kUnbounded };

  void Setup();
  void Refactor();
  IterResult Iterate();
  void Pivot(Eigen::Index row, Eigen::Index col);
  void DriveOutArtificials();
  double BasicLower(Eigen::Index row) const { return lower_[basis_[row]]; }
  double BasicUpper(Eigen::Index row) const { return upper_[basis_[row]]; }

  const LpProblem& problem_;
  const double feas_tol_;
  const double pivot_tol_;
  const double rel_pivot_;
  const int refactor_every_;

  Eigen::Index n_ = 0;        // structural columns
  Eigen::Index m_ = 0;        // rows
  Eigen::Index n_slack_ = 0;  // one per inequality row
  Eigen::Index active_ = 0;   // columns taking part in pricing and pivots

  Matrix a_full_;  // equilibrated [A | slack | artificial]
  Vector rhs_;
  Vector col_scale_;
  Vector lower_, upper_, cost_;
  std::vector<VarState> state_;
  Vector x_;  // values of nonbasic columns (basic entries are stale)
  std::vector<Eigen::Index> basis_;
  Vector x_basic_;
  RowMajorMatrix tab_;  // B^{-1} a_full_
  Vector reduced_;
  std::vector<bool> is_artificial_;

  int iterations_ = 0;
  int max_iterations_ = 0;
  int since_refactor_ = 0;
};

void DenseSimplex::Setup() {
  n_ = problem_.num_vars();
  const Eigen::Index me = problem_.eq_lhs.rows();
  const Eigen::Index mi = problem_.ineq_lhs.rows();
  m_ = me + mi;
  n_slack_ = mi;

  Matrix a(m_, n_);
  Vector b(m_);
  if (me > 0) {
    a.topRows(me) = problem_.eq_lhs;
    b.head(me) = problem_.eq_rhs;
  }
  if (mi > 0) {
    a.bottomRows(mi) = problem_.ineq_lhs;
    b.tail(mi) = problem_.ineq_rhs;
  }
  // Max-abs equilibration: rows, columns, rows again. Structural column j
  // solves for x_j / col_scale_[j].
  auto scale_rows = [&]() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double s = a.row(i).cwiseAbs().maxCoeff();
      if (s > 0.0) {
        a.row(i) /= s;
        b[i] /= s;
      }
    }
  };
  scale_rows();
  col_scale_ = Vector::Ones(n_);
  for (Eigen::Index j = 0; j < n_ && m_ > 0; ++j) {
    const double s = a.col(j).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      col_scale_[j] = 1.0 / s;
      a.col(j) /= s;
    }
  }
  scale_rows();

  // Nonbasic starting values of the structural columns.
  Vector x0(n_);
  for (Eigen::Index j = 0; j < n_; ++j) {
    const double lo = problem_.var_lower[j] / col_scale_[j];
    const double hi = problem_.var_upper[j] / col_scale_[j];
    x0[j] = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
  }
  const Vector resid = b - a * x0;

  // Slack rows with nonnegative residual start with the slack in the basis;
  // every other row gets an artificial.
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m_; ++i) {
    const bool has_slack = i >= me;
    if (!(has_slack && resid[i] >= 0.0)) art_rows.push_back(i);
  }
  const Eigen::Index n_art = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index ncols = n_ + n_slack_ + n_art;

  a_full_ = Matrix::Zero(m_, ncols);
  a_full_.leftCols(n_) = a;
  for (Eigen::Index k = 0; k < mi; ++k) a_full_(me + k, n_ + k) = 1.0;
  rhs_ = b;

  lower_.resize(ncols);
  upper_.resize(ncols);
  lower_.head(n_) = problem_.var_lower.cwiseQuotient(col_scale_);
  upper_.head(n_) = problem_.var_upper.cwiseQuotient(col_scale_);
  lower_.segment(n_, n_slack_).setZero();
  upper_.segment(n_, n_slack_).setConstant(kInf);
  lower_.tail(n_art).setZero();
  upper_.tail(n_art).setConstant(kInf);

  x_ = Vector::Zero(ncols);
  x_.head(n_) = x0;
  state_.assign(ncols, VarState::kAtLower);
  is_artificial_.assign(ncols, false);
  for (Eigen::Index j = 0; j < n_; ++j) {
    const double lo = lower_[j];
    const double hi = upper_[j];
    if (lo == hi) {
      state_[j] = VarState::kFixed;
    } else if (std::isfinite(lo)) {
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(hi)) {
      state_[j] = VarState::kAtUpper;
    } else {
      state_[j] = VarState::kFree;
    }
  }

  basis_.assign(m_, -1);
  x_basic_.resize(m_);
  for (Eigen::Index k = 0; k < n_slack_; ++k) {
    const Eigen::Index row = me + k;
    if (resid[row] >= 0.0) {
      basis_[row] = n_ + k;
      state_[n_ + k] = VarState::kBasic;
      x_basic_[row] = resid[row];
    }
  }
  for (Eigen::Index k = 0; k < n_art; ++k) {
    const Eigen::Index row = art_rows[k];
    const Eigen::Index col = n_ + n_slack_ + k;
    const double sign = resid[row] >= 0.0 ? 1.0 : -1.0;
    a_full_(row, col) = sign;
    basis_[row] = col;
    state_[col] = VarState::kBasic;
    is_artificial_[col] = true;
    x_basic_[row] = std::abs(resid[row]);
  }

  // The initial basis is diagonal with +-1 entries, so it is its own inverse.
  tab_.resize(m_, ncols);
  for (Eigen::Index i = 0; i < m_; ++i) {
    tab_.row(i) = a_full_.row(i) * a_full_(i, basis_[i]);
  }
  active_ = ncols;

  cost_ = Vector::Zero(ncols);
  cost_.tail(n_art).setOnes();
  reduced_ = cost_;
  for (Eigen::Index i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb != 0.0) reduced_ -= cb * tab_.row(i).transpose();
  }
  max_iterations_ = static_cast<int>(20 * (m_ + ncols) + 5000);
}

void DenseSimplex::Refactor() {
  since_refactor_ = 0;
  if (m_ == 0) return;
  Matrix basis_cols(m_, m_);
  for (Eigen::Index i = 0; i < m_; ++i) basis_cols.col(i) = a_full_.col(basis_[i]);
  const Eigen::PartialPivLU<Matrix> lu(basis_cols);

  const Eigen::Index ncols = a_full_.cols();
  Vector rest = rhs_;
  for (Eigen::Index j = 0; j < ncols; ++j) {
    if (state_[j] != VarState::kBasic && x_[j] != 0.0) {
      rest -= a_full_.col(j) * x_[j];
    }
  }
  Matrix fresh = lu.solve(a_full_);
  Vector xb = lu.solve(rest);
  // One step of iterative refinement on the basic values.
  xb += lu.solve(rest - basis_cols * xb);
  if (!fresh.allFinite() || !xb.allFinite()) {
    throw NumericalBreakdown("SolveLp: singular basis during refactorization");
  }
  tab_ = fresh;
  x_basic_ = xb;
  reduced_ = cost_;
  for (Eigen::Index i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb != 0.0) reduced_ -= cb * tab_.row(i).transpose();
  }
}

void DenseSimplex::Pivot(Eigen::Index row, Eigen::Index col) {
  const double piv = tab_(row, col);
  tab_.row(row).head(active_) /= piv;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (i == row) continue;
    const double f = tab_(i, col);
    if (f != 0.0) tab_.row(i).head(active_) -= f * tab_.row(row).head(active_);
  }
  const double fd = reduced_[col];
  if (fd != 0.0) {
    reduced_.head(active_) -= fd * tab_.row(row).head(active_).transpose();
  }
  ++since_refactor_;
}

DenseSimplex::IterResult DenseSimplex::Iterate() {
  const double cost_scale = std::max(1.0, cost_.head(active_).cwiseAbs().maxCoeff());
  const double opt_tol = 1e-9 * cost_scale;
  int degenerate = 0;
  bool bland = false;
  std::vector<char> set_aside(static_cast<size_t>(active_), 0);
  bool any_aside = false;
  bool accept_small = false;
  for (;;) {
    if (++iterations_ > max_iterations_) {
      throw NumericalBreakdown("SolveLp: iteration limit reached");
    }
    if (since_refactor_ >= refactor_every_) Refactor();

    // Pricing.
    Eigen::Index enter = -1;
    double best = 0.0;
    double dir = 0.0;
    for (Eigen::Index j = 0; j < active_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::kBasic || s == VarState::kFixed || set_aside[j]) continue;
      const double d = reduced_[j];
      double score = 0.0;
      double jdir = 0.0;
      if ((s == VarState::kAtLower || s == VarState::kFree) && d < -opt_tol) {
        score = -d;
        jdir = 1.0;
      } else if ((s == VarState::kAtUpper || s == VarState::kFree) &&
                 d > opt_tol) {
        score = d;
        jdir = -1.0;
      }
      if (jdir == 0.0) continue;
      if (bland) {
        enter = j;
        dir = jdir;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
        dir = jdir;
      }
    }
    if (enter < 0 && any_aside) {
      // Only small pivots remain: take one and refactor right after it.
      std::fill(set_aside.begin(), set_aside.end(), 0);
      any_aside = false;
      accept_small = true;
      continue;
    }
    if (enter < 0) return IterResult::kOptimal;

    // Harris two-pass ratio test. Basic value i moves by -dir * tab(i, enter)
    // per unit step of the entering column.
    double theta_max = kInf;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double a = dir * tab_(i, enter);
      if (a > pivot_tol_) {
        const double lo = BasicLower(i);
        if (std::isfinite(lo)) {
          theta_max = std::min(theta_max, (x_basic_[i] - lo + kHarrisTol) / a);
        }
      } else if (a < -pivot_tol_) {
        const double hi = BasicUpper(i);
        if (std::isfinite(hi)) {
          theta_max = std::min(theta_max, (hi - x_basic_[i] + kHarrisTol) / -a);
        }
      }
    }
    const double flip = upper_[enter] - lower_[enter];
    if (!std::isfinite(theta_max) && !std::isfinite(flip)) {
      return IterResult::kUnbounded;
    }

    Eigen::Index leave = -1;
    double theta = 0.0;
    if (flip <= theta_max) {
      theta = flip;
    } else {
      double best_piv = 0.0;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = dir * tab_(i, enter);
        double ratio;
        if (a > pivot_tol_ && std::isfinite(BasicLower(i))) {
          ratio = (x_basic_[i] - BasicLower(i)) / a;
        } else if (a < -pivot_tol_ && std::isfinite(BasicUpper(i))) {
          ratio = (BasicUpper(i) - x_basic_[i]) / -a;
        } else {
          continue;
        }
        if (bland) {
          if (ratio < best_ratio - 1e-12 ||
              (ratio <= best_ratio + 1e-12 && leave >= 0 &&
               basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        } else if (ratio <= theta_max && std::abs(a) > best_piv) {
          best_piv = std::abs(a);
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        throw NumericalBreakdown("SolveLp: ratio test found no pivot row");
      }
      if (!accept_small &&
          std::abs(tab_(leave, enter)) < rel_pivot_ * tab_.col(enter).cwiseAbs().maxCoeff()) {
        set_aside[enter] = 1;
        any_aside = true;
        continue;
      }
      theta = std::max(0.0, best_ratio);
    }

    if (theta > 1e-12) {
      degenerate = 0;
      bland = false;
    } else if (++degenerate > kDegenerateStreak) {
      bland = true;
    }

    if (theta != 0.0) {
      x_basic_ -= (theta * dir) * tab_.col(enter);
    }
    if (leave < 0) {
      // Bound flip, no basis change.
      if (state_[enter] == VarState::kAtLower) {
        state_[enter] = VarState::kAtUpper;
        x_[enter] = upper_[enter];
      } else {
        state_[enter] = VarState::kAtLower;
        x_[enter] = lower_[enter];
      }
      continue;
    }
    const double entering_value = x_[enter] + dir * theta;
    const Eigen::Index out = basis_[leave];
    if (dir * tab_(leave, enter) > 0.0) {
      state_[out] = VarState::kAtLower;
      x_[out] = lower_[out];
    } else {
      state_[out] = VarState::kAtUpper;
      x_[out] = upper_[out];
    }
    if (lower_[out] == upper_[out]) state_[out] = VarState::kFixed;
    basis_[leave] = enter;
    state_[enter] = VarState::kBasic;
    x_basic_[leave] = entering_value;
    Pivot(leave, enter);
    if (any_aside) std::fill(set_aside.begin(), set_aside.end(), 0);
    any_aside = false;
    if (accept_small) {
      accept_small = false;
      Refactor();
    }
  }
}

void DenseSimplex::DriveOutArtificials() {
  const Eigen::Index real_cols = n_ + n_slack_;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (!is_artificial_[basis_[i]]) continue;
    Eigen::Index best = -1;
    double best_abs = kDriveOutPivot;
    for (Eigen::Index j = 0; j < real_cols; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      const double a = std::abs(tab_(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0) continue;  // redundant row
    const Eigen::Index out = basis_[i];
    state_[out] = VarState::kFixed;
    x_[out] = 0.0;
    basis_[i] = best;
    state_[best] = VarState::kBasic;
    x_basic_[i] = x_[best];
    Pivot(i, best);
  }
  bool any_basic_art = false;
  for (Eigen::Index j = real_cols; j < a_full_.cols(); ++j) {
    lower_[j] = 0.0;
    upper_[j] = 0.0;
    if (state_[j] == VarState::kBasic) {
      any_basic_art = true;
    } else {
      state_[j] = VarState::kFixed;
      x_[j] = 0.0;
    }
  }
  active_ = any_basic_art ? a_full_.cols() : real_cols;
}

LpOutcome DenseSimplex::Run() {
  Setup();
  LpOutcome out;

  // Phase one: minimize the sum of artificials.
  Iterate();
  Refactor();
  Iterate();
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (is_artificial_[basis_[i]]) infeas += std::abs(x_basic_[i]);
  }
  if (infeas > feas_tol_) {
    out.status = LpStatus::kInfeasible;
    out.iterations = iterations_;
    return out;
  }
  DriveOutArtificials();

  // Phase two.
  cost_.setZero();
  cost_.head(n_) = problem_.cost.cwiseProduct(col_scale_);
  Refactor();
  for (int round = 0;; ++round) {
    if (Iterate() == IterResult::kUnbounded) {
      out.status = LpStatus::kUnbounded;
      out.iterations = iterations_;
      return out;
    }
      Refactor();
      bool violated = false;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double lo = BasicLower(i);
      const double hi = BasicUpper(i);
      const double slack_tol = feas_tol_ * (1.0 + std::abs(x_basic_[i]));
      if (x_basic_[i] < lo - slack_tol || x_basic_[i] > hi + slack_tol) {
        violated = true;
      }
    }
    if (violated) {
      throw NumericalBreakdown("SolveLp: basis lost primal feasibility");
    }
    // A fresh factorization may expose a few more improving columns.
    bool improvable = false;
    const double opt_tol =
        1e-9 * std::max(1.0, cost_.head(active_).cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < active_ && !improvable; ++j) {
      const VarState s = state_[j];
      const double d = reduced_[j];
      improvable = ((s == VarState::kAtLower || s == VarState::kFree) && d < -opt_tol) ||
                   ((s == VarState::kAtUpper || s == VarState::kFree) && d > opt_tol);
    }
    if (!improvable || round >= 5) break;
  }

  Vector x = x_.head(n_);
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (basis_[i] < n_) x[basis_[i]] = x_basic_[i];
  }
  x = x.cwiseProduct(col_scale_)
          .cwiseMax(problem_.var_lower)
          .cwiseMin(problem_.var_upper);
  const double resid = PrimalResidual(problem_, x);
  if (!(resid <= feas_tol_)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", resid);
    throw NumericalBreakdown(std::string("SolveLp: final residual ") + buf +
                             " exceeds feas_tol");
  }
  out.status = LpStatus::kOptimal;
  out.objective = problem_.cost.dot(x);
  out.solution = std::move(x);
  out.iterations = iterations_;
  return out;
}

}  // namespace

LpOutcome SolveLp(const LpProblem& problem, double feas_tol) {
  problem.Validate();
  const size_t rungs = std::size(kStabilityLadder);
  for (size_t k = 0;; ++k) {
    try {
      DenseSimplex simplex(problem, feas_tol, kStabilityLadder[k]);
      return simplex.Run();
    } catch (const NumericalBreakdown&) {
      if (k + 1 == rungs) throw;
    }
  }
}

}  // namespace rpitrack::numlin
