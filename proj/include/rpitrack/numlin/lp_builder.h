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

#include <utility>
#include <vector>

#include "rpitrack/numlin/lp.h"

namespace rpitrack::numlin {

/// Incremental assembly of an LpProblem from sparse rows.
class LpBuilder {
 public:
  using Terms = std::vector<std::pair<Eigen::Index, double>>;

  /// Appends one variable and returns its column index.
  Eigen::Index AddVar(double lower, double upper, double cost = 0.0);

  /// Appends `count` variables sharing bounds; returns the first index.
  Eigen::Index AddVars(Eigen::Index count, double lower, double upper);

  void AddCost(Eigen::Index var, double coef);

  /// Duplicate indices within `terms` are summed.
  void AddEq(const Terms& terms, double rhs);
  void AddLe(const Terms& terms, double rhs);
  void AddGe(const Terms& terms, double rhs);

  /// terms = rhs + s with a fresh slack s in [-slack, slack].
  void AddEqRelaxed(Terms terms, double rhs, double slack);

  void SetBounds(Eigen::Index var, double lower, double upper);

  Eigen::Index num_vars() const { return static_cast<Eigen::Index>(lower_.size()); }
  double lower(Eigen::Index var) const { return lower_[var]; }
  double upper(Eigen::Index var) const { return upper_[var]; }

  LpProblem Build() const;

 private:
  struct Row {
    Terms terms;
    double rhs;
  };

  std::vector<double> lower_, upper_, cost_;
  std::vector<Row> eq_rows_, le_rows_;
};

/// Row-major index block of a matrix-shaped group of variables.
struct VarBlock {
  Eigen::Index first = -1;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index operator()(Eigen::Index i, Eigen::Index j) const {
    return first + i * cols + j;
  }
};

VarBlock AddVarBlock(LpBuilder& b, Eigen::Index rows, Eigen::Index cols,
                     double lower, double upper);
/// The block's values in `x` as a rows x cols matrix.
Matrix ExtractBlock(const Vector& x, const VarBlock& blk);

}  // namespace rpitrack::numlin
