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
#include "rpitrack/numlin/linalg.h"

#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rpitrack/errors.h"

namespace rpitrack::numlin {

Matrix LeftInverse(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw DimensionMismatch("LeftInverse: empty matrix");
  }
  RequireFinite(m, "LeftInverse");
  if (m.rows() < m.cols()) {
    throw RankDeficient("LeftInverse: fewer rows than columns");
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const auto& r = qr.matrixQR();
  const double top = std::abs(r(0, 0));
  double bottom = top;
  for (Eigen::Index k = 1; k < m.cols(); ++k) {
    bottom = std::min(bottom, std::abs(r(k, k)));
  }
  if (top == 0.0 || bottom < tol * top) {
    throw RankDeficient("LeftInverse: pivot ratio " +
                        std::to_string(top == 0.0 ? 0.0 : bottom / top) +
                        " below tolerance");
  }
  return qr.solve(Matrix::Identity(m.rows(), m.rows()));
}

Eigen::Index NumericalRank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] > tol * s[0]) ++rank;
  }
  return rank;
}

}  // namespace rpitrack::numlin
