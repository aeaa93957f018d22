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
#include "rpitrack/model/closed_loop.h"

#include <cmath>

#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"

namespace rpitrack::model {

ClosedLoop BuildClosedLoop(const PlantModel& plant, const ControllerGains& gains,
                           const ReferenceClass& ref) {
  gains.Validate(plant.m());
  if (!std::isfinite(ref.alpha)) {
    throw DimensionMismatch("BuildClosedLoop: alpha is not finite");
  }
  const Eigen::Index n = plant.n();
  const Matrix& b = plant.b();
  ClosedLoop cl;
  cl.a_cl = Matrix::Zero(n + 2, n + 2);
  cl.a_cl.topLeftCorner(n, n) = plant.a() + b * gains.k * plant.c();
  cl.a_cl.block(0, n, n, 1) = b * gains.k_i1;
  cl.a_cl.block(0, n + 1, n, 1) = b * gains.k_i2;
  cl.a_cl.block(n, 0, 1, n) = -plant.c();
  cl.a_cl(n, n + 1) = -ref.alpha;
  cl.a_cl(n + 1, n) = 1.0;
  cl.b_cl = Matrix::Zero(n + 2, 1);
  cl.b_cl.topRows(n) = b * gains.k_r;
  cl.b_cl(n, 0) = 1.0;
  return cl;
}

DecomposedLoop DecomposeClosedLoop(const ClosedLoop& cl,
                                   const PlantModel& plant) {
  const Eigen::Index n = plant.n();
  numlin::RequireShape(cl.a_cl, n + 2, n + 2, "DecomposeClosedLoop a_cl");
  numlin::RequireShape(cl.b_cl, n + 2, 1, "DecomposeClosedLoop b_cl");
  const Matrix b_pinv = numlin::LeftInverse(plant.b());
  const Matrix& c = plant.c();
  const Matrix bkc = cl.a_cl.topLeftCorner(n, n) - plant.a();
  DecomposedLoop out;
  out.gains.k = b_pinv * bkc * c.transpose() / c.squaredNorm();
  out.gains.k_i1 = b_pinv * cl.a_cl.block(0, n, n, 1);
  out.gains.k_i2 = b_pinv * cl.a_cl.block(0, n + 1, n, 1);
  out.gains.k_r = b_pinv * cl.b_cl.topRows(n);
  out.alpha = -cl.a_cl(n, n + 1);
  return out;
}

bool TransmissionZeroCheck(const PlantModel& plant, const ReferenceClass& ref,
                           double tol) {
  const Eigen::Index n = plant.n();
  const Eigen::Index m = plant.m();
  Matrix re = Matrix::Zero(n + 1, n + m);
  re.topLeftCorner(n, n) = plant.a();
  re.topRightCorner(n, m) = plant.b();
  re.bottomLeftCorner(1, n) = plant.c();
  if (ref.alpha == 0.0) return numlin::NumericalRank(re, tol) == n + 1;
  // s = j omega; the pencil is re + j im with im = [-omega I, 0; 0, 0].
  // The conjugate root gives the same rank.
  const double omega = std::sqrt(ref.alpha);
  Matrix im = Matrix::Zero(n + 1, n + m);
  im.topLeftCorner(n, n) = -omega * Matrix::Identity(n, n);
  Matrix doubled(2 * (n + 1), 2 * (n + m));
  doubled << re, -im, im, re;
  return numlin::NumericalRank(doubled, tol) == 2 * (n + 1);
}

polyhedra::Polyhedron StackStateConstraints(const StateConstraint& xc,
                                            const IntegralBounds& xi) {
  xi.Validate();
  const Eigen::Index lx = xc.x_mat.rows();
  const Eigen::Index n = xc.x_mat.cols();
  if (lx < 1 || n < 1) {
    throw DimensionMismatch("StackStateConstraints: empty X");
  }
  polyhedra::Polyhedron p;
  p.shape = Matrix::Zero(lx + 4, n + 2);
  p.shape.topLeftCorner(lx, n) = xc.x_mat;
  p.shape.bottomRightCorner(4, 2) = xi.AsMatrix();
  p.offset = Vector::Ones(lx + 4);
  return p;
}

Matrix InputConstraintMap(const ControllerGains& gains,
                          const PlantModel& plant) {
  gains.Validate(plant.m());
  const Eigen::Index n = plant.n();
  const Eigen::Index m = plant.m();
  Matrix map(m, n + 3);
  map.leftCols(n) = gains.k * plant.c();
  map.col(n) = gains.k_i1;
  map.col(n + 1) = gains.k_i2;
  map.col(n + 2) = gains.k_r;
  return map;
}

ProblemCounts ProblemSize(const ProblemDims& d) {
  for (std::int64_t v : {d.n, d.m, d.l, d.l_r, d.l_x, d.l_xi1, d.l_xi2, d.l_u}) {
    if (v < 1) throw DimensionMismatch("ProblemSize: dimensions must be >= 1");
  }
  const std::int64_t n_cl = d.n + 2;
  ProblemCounts c;
  c.num_variables =
      d.m + d.l * (n_cl + d.l + d.l_r + d.l_x + d.l_xi1 + d.l_xi2 + d.l_u) +
      2 * (d.l_u + 2) + n_cl * n_cl + 1;
  c.num_equalities =
      n_cl * (d.l + d.l_x + d.l_xi1 + d.l_xi2 + d.l_u + n_cl) + 2 * (d.l + d.l_u);
  c.num_inequalities = d.l + d.l_x + d.l_xi1 + d.l_xi2 + d.l_u;
  return c;
}

}  // namespace rpitrack::model
