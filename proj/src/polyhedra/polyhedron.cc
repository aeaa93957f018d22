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
#include "rpitrack/polyhedra/polyhedron.h"

#include "rpitrack/errors.h"
#include "rpitrack/numlin/lp.h"

namespace rpitrack::polyhedra {

void Polyhedron::Validate() const {
  if (shape.cols() < 1) throw DimensionMismatch("Polyhedron: no columns");
  if (shape.rows() != offset.size()) {
    throw DimensionMismatch("Polyhedron: offset length differs from row count");
  }
  numlin::RequireFinite(shape, "Polyhedron shape");
  numlin::RequireFinite(offset, "Polyhedron offset");
}

Polyhedron Polyhedron::Box(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw DimensionMismatch("Polyhedron::Box: bound lengths differ");
  }
  const Eigen::Index n = lower.size();
  Polyhedron p;
  p.shape.resize(2 * n, n);
  p.shape.topRows(n) = Matrix::Identity(n, n);
  p.shape.bottomRows(n) = -Matrix::Identity(n, n);
  p.offset.resize(2 * n);
  p.offset.head(n) = upper;
  p.offset.tail(n) = -lower;
  return p;
}

bool Polyhedron::OriginInterior() const {
  return offset.size() > 0 && (offset.array() > 0.0).all();
}

bool Contains(const Polyhedron& poly, const Vector& x, double tol) {
  poly.Validate();
  if (x.size() != poly.dim()) {
    throw DimensionMismatch("Contains: point dimension differs from polyhedron");
  }
  if (poly.num_rows() == 0) return true;
  return ((poly.shape * x - poly.offset).array() <= tol).all();
}

bool IsMetzler(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("IsMetzler: non-square");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && !(m(i, j) >= -tol)) return false;
    }
  }
  return true;
}

std::optional<double> Support(const Polyhedron& poly,
                              const Vector& direction) {
  poly.Validate();
  if (direction.size() != poly.dim()) {
    throw DimensionMismatch("Support: direction dimension differs");
  }
  numlin::LpProblem lp;
  lp.cost = -direction;
  lp.eq_lhs.resize(0, poly.dim());
  lp.eq_rhs.resize(0);
  lp.ineq_lhs = poly.shape;
  lp.ineq_rhs = poly.offset;
  lp.var_lower = Vector::Constant(poly.dim(), -numlin::kInf);
  lp.var_upper = Vector::Constant(poly.dim(), numlin::kInf);
  const numlin::LpOutcome out = numlin::SolveLp(lp);
  switch (out.status) {
    case numlin::LpStatus::kOptimal:
      return -*out.objective;
    case numlin::LpStatus::kUnbounded:
      return std::nullopt;
    case numlin::LpStatus::kInfeasible:
      break;
  }
  throw EmptyInner("Support: polyhedron is empty");
}

bool IsBounded(const Polyhedron& poly) {
  for (Eigen::Index j = 0; j < poly.dim(); ++j) {
    Vector e = Vector::Zero(poly.dim());
    e[j] = 1.0;
    if (!Support(poly, e)) return false;
    if (!Support(poly, -e)) return false;
  }
  return true;
}

}  // namespace rpitrack::polyhedra
