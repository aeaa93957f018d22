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

#include <limits>
#include <string_view>

#include <Eigen/Dense>

namespace rpitrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

namespace numlin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Throws DimensionMismatch if any entry of `m` is NaN or infinite.
void RequireFinite(const Eigen::Ref<const Matrix>& m, std::string_view what);

/// Throws DimensionMismatch unless `m` is rows x cols.
void RequireShape(const Eigen::Ref<const Matrix>& m, Eigen::Index rows,
                  Eigen::Index cols, std::string_view what);

/// Largest absolute entry, 0 for an empty matrix.
double MaxAbs(const Eigen::Ref<const Matrix>& m);

}  // namespace numlin
}  // namespace rpitrack
