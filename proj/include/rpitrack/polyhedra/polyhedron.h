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

namespace rpitrack::polyhedra {

/// {x : shape * x <= offset}.
struct Polyhedron {
  Matrix shape;
  Vector offset;

  Eigen::Index dim() const { return shape.cols(); }
  Eigen::Index num_rows() const { return shape.rows(); }

  /// Throws DimensionMismatch unless the shape has at least one column, the
  /// offset length matches the row count, and all entries are finite.
  void Validate() const;

  /// Axis-aligned box lower <= x <= upper as 2n rows (+e_i rows first).
  static Polyhedron Box(const Vector& lower, const Vector& upper);

  /// True iff offset > 0, i.e. the origin is an interior point.
  bool OriginInterior() const;
};

/// shape * x <= offset + tol, elementwise.
bool Contains(const Polyhedron& poly, const Vector& x, double tol);

/// Every off-diagonal entry is >= -tol.
bool IsMetzler(const Matrix& m, double tol);

/// Maximum of direction' x over poly; nullopt when the LP is unbounded.
/// Throws EmptyInner when the polyhedron is empty.
std::optional<double> Support(const Polyhedron& poly, const Vector& direction);

/// True iff the polyhedron is bounded (2 * dim LPs). Throws EmptyInner when
/// the polyhedron is empty.
bool IsBounded(const Polyhedron& poly);

}  // namespace rpitrack::polyhedra
