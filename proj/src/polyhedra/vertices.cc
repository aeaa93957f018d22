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
#include "rpitrack/polyhedra/vertices.h"

#include <string>

#include <Eigen/LU>

#include "rpitrack/errors.h"

namespace rpitrack::polyhedra {

std::vector<Vector> Vertices(const Polyhedron& poly) {
  poly.Validate();
  const Eigen::Index n = poly.dim();
  if (n > kMaxVertexDim) {
    throw TooHighDimensional("Vertices: dimension " + std::to_string(n) +
                             " exceeds " + std::to_string(kMaxVertexDim));
  }
  if (!IsBounded(poly)) throw Unbounded("Vertices: polyhedron is unbounded");

  const Eigen::Index l = poly.num_rows();
  std::vector<Vector> out;
  if (l < n) return out;
  std::vector<Eigen::Index> idx(n);
  for (Eigen::Index k = 0; k < n; ++k) idx[k] = k;
  Matrix a(n, n);
  Vector b(n);
  while (true) {
    for (Eigen::Index k = 0; k < n; ++k) {
      a.row(k) = poly.shape.row(idx[k]);
      b[k] = poly.offset[idx[k]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      const Vector x = lu.solve(b);
      if (Contains(poly, x, kVertexDedupTol)) {
        bool seen = false;
        for (const Vector& v : out) {
          if ((v - x).cwiseAbs().maxCoeff() <= kVertexDedupTol) {
            seen = true;
            break;
          }
        }
        if (!seen) out.push_back(x);
      }
    }
    Eigen::Index k = n - 1;
    while (k >= 0 && idx[k] == l - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (Eigen::Index j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace rpitrack::polyhedra
