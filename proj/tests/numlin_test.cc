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
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"
#include "rpitrack/numlin/lp.h"
#include "rpitrack/numlin/lp_builder.h"
#include "rpitrack/numlin/stability.h"

namespace rpitrack::numlin {
namespace {

LpProblem Box1d(double lower, double upper) {
  LpProblem p;
  p.cost = Vector::Constant(1, -1.0);
  p.eq_lhs.resize(0, 1);
  p.eq_rhs.resize(0);
  p.ineq_lhs = Matrix::Constant(1, 1, 1.0);
  p.ineq_rhs = Vector::Constant(1, upper);
  p.var_lower = Vector::Constant(1, lower);
  p.var_upper = Vector::Constant(1, kInf);
  return p;
}

// Minimum over all basic feasible points: every choice of n linearly
// independent active rows (equalities always active) is solved directly.
std::optional<double> VertexOracle(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  std::vector<RowVector> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < p.ineq_lhs.rows(); ++i) {
    rows.push_back(p.ineq_lhs.row(i));
    rhs.push_back(p.ineq_rhs[i]);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    RowVector e = RowVector::Zero(n);
    e[j] = 1.0;
    if (std::isfinite(p.var_upper[j])) {
      rows.push_back(e);
      rhs.push_back(p.var_upper[j]);
    }
    if (std::isfinite(p.var_lower[j])) {
      rows.push_back(-e);
      rhs.push_back(-p.var_lower[j]);
    }
  }
  const Eigen::Index me = p.eq_lhs.rows();
  const int pick = static_cast<int>(n - me);
  const int total = static_cast<int>(rows.size());
  std::optional<double> best;
  std::vector<int> idx(pick);
  for (int k = 0; k < pick; ++k) idx[k] = k;
  while (true) {
    Matrix a(n, n);
    Vector b(n);
    a.topRows(me) = p.eq_lhs;
    b.head(me) = p.eq_rhs;
    for (int k = 0; k < pick; ++k) {
      a.row(me + k) = rows[idx[k]];
      b[me + k] = rhs[idx[k]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.rank() == n) {
      const Vector x = lu.solve(b);
      if (PrimalResidual(p, x) <= 1e-9) {
        const double obj = p.cost.dot(x);
        if (!best || obj < *best) best = obj;
      }
    }
    int k = pick - 1;
    while (k >= 0 && idx[k] == total - pick + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < pick; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

LpProblem RandomBoundedLp(std::mt19937_64& rng, int n, int m_ineq, int m_eq) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LpProblem p;
  p.cost = Vector::NullaryExpr(n, [&] { return u(rng); });
  const Vector interior = Vector::NullaryExpr(n, [&] { return 0.5 * u(rng); });
  p.ineq_lhs = Matrix::NullaryExpr(m_ineq, n, [&] { return u(rng); });
  p.ineq_rhs = p.ineq_lhs * interior +
               Vector::NullaryExpr(m_ineq, [&] { return 0.1 + std::abs(u(rng)); });
  p.eq_lhs = Matrix::NullaryExpr(m_eq, n, [&] { return u(rng); });
  p.eq_rhs = p.eq_lhs * interior;
  p.var_lower = Vector::Constant(n, -2.0);
  p.var_upper = Vector::Constant(n, 2.0);
  return p;
}

TEST_CASE("one-variable box optimum") {
  const LpOutcome out = SolveLp(Box1d(0.0, 1.0));
  REQUIRE(out.optimal());
  CHECK((*out.solution)[0] == doctest::Approx(1.0));
  CHECK(*out.objective == doctest::Approx(-1.0));
}

TEST_CASE("empty box is infeasible") {
  LpProblem p = Box1d(0.0, -1.0);
  p.cost.setZero();
  const LpOutcome out = SolveLp(p);
  CHECK(out.status == LpStatus::kInfeasible);
  CHECK_FALSE(out.solution.has_value());
  CHECK_FALSE(out.objective.has_value());
}

TEST_CASE("unbounded ray is reported") {
  LpProblem p = Box1d(0.0, 1.0);
  p.ineq_lhs(0, 0) = -1.0;
  CHECK(SolveLp(p).status == LpStatus::kUnbounded);
}

TEST_CASE("free variables and equalities") {
  // min x + y  s.t.  x - y = 1, x >= -3, y free, x + y >= -4
  LpBuilder b;
  const auto x = b.AddVar(-3.0, kInf, 1.0);
  const auto y = b.AddVar(-kInf, kInf, 1.0);
  b.AddEq({{x, 1.0}, {y, -1.0}}, 1.0);
  b.AddGe({{x, 1.0}, {y, 1.0}}, -4.0);
  const LpOutcome out = SolveLp(b.Build());
  REQUIRE(out.optimal());
  CHECK(*out.objective == doctest::Approx(-4.0));
  CHECK((*out.solution)[0] == doctest::Approx(-1.5));
}

TEST_CASE("redundant equality rows are tolerated") {
  LpBuilder b;
  const auto x = b.AddVar(0.0, 5.0, -1.0);
  const auto y = b.AddVar(0.0, 5.0, -2.0);
  b.AddEq({{x, 1.0}, {y, 1.0}}, 3.0);
  b.AddEq({{x, 2.0}, {y, 2.0}}, 6.0);
  b.AddEq({{x, 1.0}, {x, 1.0}, {y, 2.0}}, 6.0);
  const LpOutcome out = SolveLp(b.Build());
  REQUIRE(out.optimal());
  CHECK(*out.objective == doctest::Approx(-6.0));
}

TEST_CASE("inconsistent equalities are infeasible") {
  LpBuilder b;
  const auto x = b.AddVar(-kInf, kInf);
  b.AddEq({{x, 1.0}}, 1.0);
  b.AddEq({{x, 1.0}}, 2.0);
  CHECK(SolveLp(b.Build()).status == LpStatus::kInfeasible);
}

TEST_CASE("highly degenerate vertex") {
  // Many constraints through the optimum (1,1,1).
  LpBuilder b;
  const auto x0 = b.AddVar(0.0, kInf, -1.0);
  const auto x1 = b.AddVar(0.0, kInf, -1.0);
  const auto x2 = b.AddVar(0.0, kInf, -1.0);
  for (int k = 1; k <= 30; ++k) {
    const double a = 1.0 + 0.1 * k;
    b.AddLe({{x0, a}, {x1, 1.0}, {x2, 1.0}}, a + 2.0);
    b.AddLe({{x0, 1.0}, {x1, a}, {x2, 1.0}}, a + 2.0);
    b.AddLe({{x0, 1.0}, {x1, 1.0}, {x2, a}}, a + 2.0);
  }
  const LpOutcome out = SolveLp(b.Build());
  REQUIRE(out.optimal());
  CHECK(*out.objective == doctest::Approx(-3.0));
}

TEST_CASE("malformed problems throw DimensionMismatch") {
  LpProblem p = Box1d(0.0, 1.0);
  p.var_upper = Vector::Constant(1, -1.0);
  CHECK_THROWS_AS(SolveLp(p), DimensionMismatch);
  p = Box1d(0.0, 1.0);
  p.ineq_rhs.resize(2);
  CHECK_THROWS_AS(SolveLp(p), DimensionMismatch);
  p = Box1d(0.0, 1.0);
  p.cost[0] = std::nan("");
  CHECK_THROWS_AS(SolveLp(p), DimensionMismatch);
}

TEST_CASE("random 5-variable LPs match the vertex oracle") {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 60; ++trial) {
    const int m_eq = trial % 3 == 0 ? 1 : 0;
    const LpProblem p = RandomBoundedLp(rng, 5, 4, m_eq);
    const std::optional<double> oracle = VertexOracle(p);
    REQUIRE(oracle.has_value());
    const LpOutcome out = SolveLp(p);
    REQUIRE(out.optimal());
    CHECK(PrimalResidual(p, *out.solution) <= kDefaultFeasTol);
    CHECK(std::abs(*out.objective - *oracle) <= 1e-8);
  }
}

TEST_CASE("solver is deterministic") {
  std::mt19937_64 rng(7);
  const LpProblem p = RandomBoundedLp(rng, 12, 20, 3);
  const LpOutcome a = SolveLp(p);
  const LpOutcome b = SolveLp(p);
  REQUIRE(a.optimal());
  CHECK(*a.solution == *b.solution);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("larger random LPs stay feasible") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const LpProblem p = RandomBoundedLp(rng, 120, 80, 40);
    const LpOutcome out = SolveLp(p);
    REQUIRE(out.optimal());
    CHECK(PrimalResidual(p, *out.solution) <= kDefaultFeasTol);
  }
}

TEST_CASE("hurwitz basics") {
  CHECK(IsHurwitz(-Matrix::Identity(2, 2), 0.5));
  CHECK_FALSE(IsHurwitz(-Matrix::Identity(2, 2), 1.0));
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  CHECK_FALSE(IsHurwitz(rot, 1e-9));
  CHECK_FALSE(IsHurwitz(rot, 0.0));
  CHECK_THROWS_AS(IsHurwitz(Matrix::Zero(2, 3), 0.0), DimensionMismatch);
  CHECK_THROWS_AS(IsHurwitz(Matrix::Identity(13, 13), 0.0), DimensionMismatch);
}

TEST_CASE("characteristic polynomial of a companion matrix") {
  // s^3 + 6 s^2 + 11 s + 6
  Matrix m(3, 3);
  m << -6, -11, -6, 1, 0, 0, 0, 1, 0;
  const Vector p = CharacteristicPolynomial(m);
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(6.0));
  CHECK(p[2] == doctest::Approx(11.0));
  CHECK(p[3] == doctest::Approx(6.0));
  CHECK(IsHurwitz(m, 0.999));
  CHECK_FALSE(IsHurwitz(m, 1.001));
}

TEST_CASE("two-tank closed loop with the tabulated objective-2 gains") {
  // Rows [A+BKC, B K_I1, B K_I2; -C, 0, 0; 0, 1, 0] written out by hand.
  const double k = -3.8881, ki1 = 0.3733, ki2 = 0.0085;
  Matrix acl(4, 4);
  acl << -0.0304 + 6.6667 * k, 0.0187, 6.6667 * ki1, 6.6667 * ki2,
      10.0 * k, -0.0187, 10.0 * ki1, 10.0 * ki2,
      -1, 0, 0, 0,
      0, 0, 1, 0;
  // Routh table of the characteristic polynomial, evaluated independently.
  const Vector p = CharacteristicPolynomial(acl);
  const Eigen::EigenSolver<Matrix> es(acl);
  const double max_re = es.eigenvalues().real().maxCoeff();
  CHECK(max_re < 0.0);
  CHECK(IsHurwitz(acl, 1e-4));
  for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p[i] > 0.0);
}

TEST_CASE("routh test agrees with root finding on random polynomials") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-2.0, 1.0);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int deg = 1 + trial % 4;
    Vector coeffs(deg + 1);
    coeffs[0] = 1.0;
    for (int j = 1; j <= deg; ++j) coeffs[j] = 3.0 * (u(rng) + 0.6);
    Matrix comp = Matrix::Zero(deg, deg);
    for (int j = 0; j < deg; ++j) comp(0, j) = -coeffs[j + 1];
    for (int j = 1; j < deg; ++j) comp(j, j - 1) = 1.0;
    const double max_re =
        Eigen::EigenSolver<Matrix>(comp).eigenvalues().real().maxCoeff();
    const double margin = 0.1 * (trial % 5);
    if (std::abs(max_re + margin) < 1e-6) continue;
    CHECK(IsHurwitz(comp, margin) == (max_re < -margin));
    if (margin == 0.0) CHECK(RouthHurwitzStable(coeffs) == (max_re < 0.0));
    ++compared;
  }
  CHECK(compared > 350);
}

TEST_CASE("left inverse") {
  const Matrix v = LeftInverse(Matrix::Identity(3, 3));
  CHECK((v - Matrix::Identity(3, 3)).norm() < 1e-14);
  const Matrix col = Matrix::Ones(2, 1);
  const Matrix w = LeftInverse(col);
  CHECK(w(0, 0) == doctest::Approx(0.5));
  CHECK(w(0, 1) == doctest::Approx(0.5));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Matrix m = Matrix::NullaryExpr(9, 4, [&] { return g(rng); });
  CHECK(MaxAbs(LeftInverse(m) * m - Matrix::Identity(4, 4)) <= 1e-10);
  Matrix deficient = m;
  deficient.col(3) = deficient.col(0) + deficient.col(1);
  CHECK_THROWS_AS(LeftInverse(deficient), RankDeficient);
  CHECK(NumericalRank(deficient, 1e-9) == 3);
}

}  // namespace
}  // namespace rpitrack::numlin
