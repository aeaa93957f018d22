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
#include "rpitrack/numlin/stability.h"

#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rpitrack/errors.h"

namespace rpitrack::numlin {

namespace {

void RequireSquare(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionMismatch("stability: matrix must be square and non-empty");
  }
  if (m.rows() > kMaxStabilityDim) {
    throw DimensionMismatch("stability: dimension " + std::to_string(m.rows()) +
                            " exceeds " + std::to_string(kMaxStabilityDim));
  }
  RequireFinite(m, "stability");
}

}  // namespace

Vector CharacteristicPolynomial(const Matrix& m) {
  RequireSquare(m);
  const Eigen::Index n = m.rows();
  Matrix h = m;
  if (n > 2) h = Eigen::HessenbergDecomposition<Matrix>(m).matrixH();

  // p[k] holds det(sI - H[0:k, 0:k]) as ascending coefficients.
  std::vector<Vector> p(n + 1);
  p[0] = Vector::Ones(1);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Vector next = Vector::Zero(k + 1);
    next.tail(k) += p[k - 1];
    next.head(k) -= h(k - 1, k - 1) * p[k - 1];
    double sub = 1.0;
    for (Eigen::Index i = 1; i < k; ++i) {
      sub *= h(k - i, k - i - 1);
      if (sub == 0.0) break;
      next.head(k - i) -= (h(k - i - 1, k - 1) * sub) * p[k - i - 1];
    }
    p[k] = next;
  }
  return p[n].reverse();
}

bool RouthHurwitzStable(const Vector& coeffs) {
  const Eigen::Index deg = coeffs.size() - 1;
  if (deg < 0 || coeffs[0] == 0.0) {
    throw DimensionMismatch("RouthHurwitzStable: leading coefficient is zero");
  }
  const Vector a = coeffs / coeffs[0];
  if (deg == 0) return true;
  const Eigen::Index width = deg / 2 + 1;
  Vector prev = Vector::Zero(width);
  Vector cur = Vector::Zero(width);
  for (Eigen::Index j = 0; j <= deg; ++j) {
    if (j % 2 == 0) {
      prev[j / 2] = a[j];
    } else {
      cur[j / 2] = a[j];
    }
  }
  for (Eigen::Index row = 1; row <= deg; ++row) {
    if (!(cur[0] > 0.0)) return false;
    Vector next = Vector::Zero(width);
    for (Eigen::Index j = 0; j + 1 < width; ++j) {
      next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
    }
    prev = cur;
    cur = next;
  }
  return true;
}

bool IsHurwitz(const Matrix& m, double margin) {
  RequireSquare(m);
  if (!std::isfinite(margin)) {
    throw DimensionMismatch("IsHurwitz: non-finite margin");
  }
  const Matrix shifted =
      m + margin * Matrix::Identity(m.rows(), m.cols());
  return RouthHurwitzStable(CharacteristicPolynomial(shifted));
}

}  // namespace rpitrack::numlin
