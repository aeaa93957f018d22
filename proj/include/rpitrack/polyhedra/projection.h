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

#include <ostream>
#include <utility>
#include <vector>

#include "rpitrack/polyhedra/polyhedron.h"

namespace rpitrack::polyhedra {

inline constexpr Eigen::Index kMaxProjectionDim = 8;

/// Projection onto coordinates (dims.first, dims.second) by Fourier-Motzkin
/// elimination of the remaining coordinates. After every elimination step
/// rows are normalized, duplicates merged and LP-redundant rows dropped.
///
/// Throws DimensionMismatch for bad indices, TooHighDimensional above
/// dimension 8, Unbounded for an unbounded input.
Polyhedron Project2d(const Polyhedron& poly,
                     std::pair<Eigen::Index, Eigen::Index> dims);

/// Drops rows implied by the others, one LP per row.
Polyhedron RemoveRedundantRows(const Polyhedron& poly);

/// Vertices of a bounded 2-D polyhedron in counterclockwise order, starting
/// from the vertex with the smallest angle around the centroid.
std::vector<Vector> PolygonCcw(const Polyhedron& poly);

/// "x,y" header followed by one vertex per line.
void WritePolygonCsv(std::ostream& os, const std::vector<Vector>& vertices);

}  // namespace rpitrack::polyhedra
