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

inline constexpr Eigen::Index kMaxStabilityDim = 12;

/// Coefficients of det(sI - M), highest power first (leading entry 1).
/// Computed from the Hessenberg form by La Budde's recurrence.
Vector CharacteristicPolynomial(const Matrix& m);

/// Strict Routh-Hurwitz test: true iff every root of the polynomial lies in
/// the open left half-plane. A zero in the first column counts as unstable.
bool RouthHurwitzStable(const Vector& coeffs);

/// True iff every eigenvalue of `m` has real part < -margin.
/// Throws DimensionMismatch for a non-square, empty, non-finite or oversized
/// matrix.
bool IsHurwitz(const Matrix& m, double margin);

}  // namespace rpitrack::numlin
