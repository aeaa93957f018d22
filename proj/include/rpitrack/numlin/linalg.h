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

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::numlin {

inline constexpr double kDefaultRankTol = 1e-9;

/// V with V * m = I. Uses a column-pivoted QR factorization; throws
/// RankDeficient when the smallest pivot falls below tol times the largest.
Matrix LeftInverse(const Matrix& m, double tol = kDefaultRankTol);

/// Number of singular values above tol * sigma_max (0 for a zero matrix).
Eigen::Index NumericalRank(const Matrix& m, double tol);

}  // namespace rpitrack::numlin
