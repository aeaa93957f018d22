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

#include "rpitrack/polyhedra/polyhedron.h"

namespace rpitrack::polyhedra {

/// Non-negative q with q * inner.shape = outer.shape and
/// q * inner.offset <= outer.offset.
struct InclusionWitness {
  Matrix q;
};

/// Searches for an inclusion witness with one LP over the entries of q,
/// minimizing the total of q * inner.offset. Returns nullopt when no witness
/// exists (inner is not a subset of outer). The offset rows are relaxed by
/// `tol`.
///
/// Throws DimensionMismatch if the ambient dimensions differ and EmptyInner
/// if inner is empty.
std::optional<InclusionWitness> FindInclusionWitness(const Polyhedron& inner,
                                                     const Polyhedron& outer,
                                                     double tol);

struct MinkowskiWitness {
  Matrix q;    // rows of target, columns of set_a
  Matrix q_r;  // rows of target, columns of set_b
};

/// Witness for map_a * set_a (+) map_b * set_b being a subset of target:
///   q * P_a = P_t * map_a,  q_r * P_b = P_t * map_b,
///   q * phi_a + q_r * phi_b <= phi_t (+ tol),  q, q_r >= 0.
std::optional<MinkowskiWitness> FindMinkowskiInclusion(
    const Matrix& map_a, const Polyhedron& set_a, const Matrix& map_b,
    const Polyhedron& set_b, const Polyhedron& target, double tol);

}  // namespace rpitrack::polyhedra
