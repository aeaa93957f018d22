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
#include "rpitrack/polyhedra/inclusion.h"

#include <string>
#include <vector>

#include "rpitrack/errors.h"
#include "rpitrack/numlin/lp_builder.h"

namespace rpitrack::polyhedra {

namespace {

void RequireNonEmpty(const Polyhedron& p, const char* what) {
  numlin::LpBuilder b;
  const Eigen::Index x0 = b.AddVars(p.dim(), -numlin::kInf, numlin::kInf);
  for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
    numlin::LpBuilder::Terms t;
    for (Eigen::Index j = 0; j < p.dim(); ++j) {
      if (p.shape(i, j) != 0.0) t.emplace_back(x0 + j, p.shape(i, j));
    }
    b.AddLe(t, p.offset[i]);
  }
  if (numlin::SolveLp(b.Build()).status == numlin::LpStatus::kInfeasible) {
    throw EmptyInner(std::string(what) + " is empty");
  }
}

// Adds variables for a non-negative (rows x p.num_rows()) multiplier block
// constrained by block * p.shape = image. Returns the first variable index.
Eigen::Index AddMultiplierBlock(numlin::LpBuilder& b, const Polyhedron& p,
                                const Matrix& image) {
  const Eigen::Index rows = image.rows();
  const Eigen::Index l = p.num_rows();
  const Eigen::Index first = b.AddVars(rows * l, 0.0, numlin::kInf);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < p.dim(); ++j) {
      numlin::LpBuilder::Terms t;
      for (Eigen::Index k = 0; k < l; ++k) {
        if (p.shape(k, j) != 0.0) t.emplace_back(first + i * l + k, p.shape(k, j));
      }
      b.AddEq(t, image(i, j));
    }
  }
  return first;
}

Matrix ReadBlock(const Vector& x, Eigen::Index first, Eigen::Index rows,
                 Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = x[first + i * cols + k];
  }
  return m;
}

}  // namespace

std::optional<InclusionWitness> FindInclusionWitness(const Polyhedron& inner,
                                                     const Polyhedron& outer,
                                                     double tol) {
  inner.Validate();
  outer.Validate();
  if (inner.dim() != outer.dim()) {
    throw DimensionMismatch("FindInclusionWitness: ambient dimensions differ");
  }
  RequireNonEmpty(inner, "FindInclusionWitness: inner polyhedron");
  const Eigen::Index l1 = inner.num_rows();
  const Eigen::Index l2 = outer.num_rows();
  if (l2 == 0) return InclusionWitness{Matrix::Zero(0, l1)};

  numlin::LpBuilder b;
  const Eigen::Index q0 = AddMultiplierBlock(b, inner, outer.shape);
  for (Eigen::Index i = 0; i < l2; ++i) {
    numlin::LpBuilder::Terms t;
    for (Eigen::Index k = 0; k < l1; ++k) {
      t.emplace_back(q0 + i * l1 + k, inner.offset[k]);
      b.AddCost(q0 + i * l1 + k, inner.offset[k]);
    }
    b.AddLe(t, outer.offset[i] + tol);
  }
  const numlin::LpOutcome out = numlin::SolveLp(b.Build());
  if (out.status != numlin::LpStatus::kOptimal) return std::nullopt;
  return InclusionWitness{ReadBlock(*out.solution, q0, l2, l1)};
}

std::optional<MinkowskiWitness> FindMinkowskiInclusion(
    const Matrix& map_a, const Polyhedron& set_a, const Matrix& map_b,
    const Polyhedron& set_b, const Polyhedron& target, double tol) {
  set_a.Validate();
  set_b.Validate();
  target.Validate();
  if (map_a.rows() != target.dim() || map_b.rows() != target.dim() ||
      map_a.cols() != set_a.dim() || map_b.cols() != set_b.dim()) {
    throw DimensionMismatch("FindMinkowskiInclusion: map dimensions differ");
  }
  RequireNonEmpty(set_a, "FindMinkowskiInclusion: set_a");
  RequireNonEmpty(set_b, "FindMinkowskiInclusion: set_b");
  const Eigen::Index lt = target.num_rows();
  const Eigen::Index la = set_a.num_rows();
  const Eigen::Index lb = set_b.num_rows();

  numlin::LpBuilder b;
  const Eigen::Index q0 = AddMultiplierBlock(b, set_a, target.shape * map_a);
  const Eigen::Index r0 = AddMultiplierBlock(b, set_b, target.shape * map_b);
  for (Eigen::Index i = 0; i < lt; ++i) {
    numlin::LpBuilder::Terms t;
    for (Eigen::Index k = 0; k < la; ++k) {
      t.emplace_back(q0 + i * la + k, set_a.offset[k]);
      b.AddCost(q0 + i * la + k, set_a.offset[k]);
    }
    for (Eigen::Index k = 0; k < lb; ++k) {
      t.emplace_back(r0 + i * lb + k, set_b.offset[k]);
      b.AddCost(r0 + i * lb + k, set_b.offset[k]);
    }
    b.AddLe(t, target.offset[i] + tol);
  }
  const numlin::LpOutcome out = numlin::SolveLp(b.Build());
  if (out.status != numlin::LpStatus::kOptimal) return std::nullopt;
  return MinkowskiWitness{ReadBlock(*out.solution, q0, lt, la),
                          ReadBlock(*out.solution, r0, lt, lb)};
}

}  // namespace rpitrack::polyhedra
