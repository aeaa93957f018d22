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

#include <vector>

#include "rpitrack/polyhedra/polyhedron.h"

namespace rpitrack::polyhedra {

inline constexpr Eigen::Index kMaxVertexDim = 4;
inline constexpr double kVertexDedupTol = 1e-9;

/// All vertices of a bounded polyhedron of dimension <= 4, found by
/// enumerating every active set of dim() rows with full rank. Degenerate
/// vertices are reported once. Order is deterministic.
///
/// Throws TooHighDimensional above dimension 4, Unbounded when some
/// coordinate direction is unbounded, EmptyInner when the set is empty.
std::vector<Vector> Vertices(const Polyhedron& poly);

}  // namespace rpitrack::polyhedra
