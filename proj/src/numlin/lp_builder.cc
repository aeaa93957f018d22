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
#include "rpitrack/numlin/lp_builder.h"

#include <string>

#include "rpitrack/errors.h"

namespace rpitrack::numlin {

Eigen::Index LpBuilder::AddVar(double lower, double upper, double cost) {
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(cost);
  return num_vars() - 1;
}

Eigen::Index LpBuilder::AddVars(Eigen::Index count, double lower,
                                double upper) {
  const Eigen::Index first = num_vars();
  for (Eigen::Index k = 0; k < count; ++k) AddVar(lower, upper);
  return first;
}

void LpBuilder::AddCost(Eigen::Index var, double coef) { cost_.at(var) += coef; }

void LpBuilder::AddEq(const Terms& terms, double rhs) {
  eq_rows_.push_back({terms, rhs});
}

void LpBuilder::AddLe(const Terms& terms, double rhs) {
  le_rows_.push_back({terms, rhs});
}

void LpBuilder::AddGe(const Terms& terms, double rhs) {
  Terms neg = terms;
  for (auto& [var, coef] : neg) coef = -coef;
  le_rows_.push_back({std::move(neg), -rhs});
}

void LpBuilder::AddEqRelaxed(Terms terms, double rhs, double slack) {
  if (slack > 0.0) terms.emplace_back(AddVar(-slack, slack), -1.0);
  AddEq(terms, rhs);
}

void LpBuilder::SetBounds(Eigen::Index var, double lower, double upper) {
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

LpProblem LpBuilder::Build() const {
  const Eigen::Index n = num_vars();
  auto fill = [n](const std::vector<Row>& rows, Matrix& lhs, Vector& rhs) {
    lhs = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n);
    rhs.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
      for (const auto& [var, coef] : rows[i].terms) {
        if (var < 0 || var >= n) {
          throw DimensionMismatch("LpBuilder: variable index " +
                                  std::to_string(var) + " out of range");
        }
        lhs(static_cast<Eigen::Index>(i), var) += coef;
      }
      rhs[static_cast<Eigen::Index>(i)] = rows[i].rhs;
    }
  };
  LpProblem p;
  p.cost = Eigen::Map<const Vector>(cost_.data(), n);
  p.var_lower = Eigen::Map<const Vector>(lower_.data(), n);
  p.var_upper = Eigen::Map<const Vector>(upper_.data(), n);
  fill(eq_rows_, p.eq_lhs, p.eq_rhs);
  fill(le_rows_, p.ineq_lhs, p.ineq_rhs);
  return p;
}

VarBlock AddVarBlock(LpBuilder& b, Eigen::Index rows, Eigen::Index cols,
                     double lower, double upper) {
  return {b.AddVars(rows * cols, lower, upper), rows, cols};
}

Matrix ExtractBlock(const Vector& x, const VarBlock& blk) {
  Matrix out(blk.rows, blk.cols);
  for (Eigen::Index i = 0; i < blk.rows; ++i) {
    for (Eigen::Index j = 0; j < blk.cols; ++j) out(i, j) = x[blk(i, j)];
  }
  return out;
}

}  // namespace rpitrack::numlin
