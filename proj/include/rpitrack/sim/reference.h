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

#include <utility>
#include <variant>
#include <vector>

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::sim {

/// r(t) = slope * t + intercept.
struct Ramp {
  double slope = 0.0;
  double intercept = 0.0;
};

/// One piece of a piecewise-linear reference, active for t > t_break
/// (the first piece also covers t = t_break).
struct RampSegment {
  double t_break = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

struct PiecewiseRamp {
  std::vector<RampSegment> segments;
};

/// r(t) = amplitude * sin(omega t + phase).
struct Sinusoid {
  double amplitude = 0.0;
  double omega = 1.0;
  double phase = 0.0;
};

using ReferenceSignal = std::variant<Ramp, PiecewiseRamp, Sinusoid>;

inline constexpr double kContinuityTol = 1e-9;

/// Throws InvalidModel for non-finite data, unsorted breakpoints, a first
/// breakpoint other than 0, or a jump larger than 1e-9 at a breakpoint.
void ValidateReference(const ReferenceSignal& sig);

/// Largest jump between consecutive pieces (0 for other kinds).
double ContinuityGap(const ReferenceSignal& sig);

double EvalReference(const ReferenceSignal& sig, double t);

/// Exact minimum and maximum of r over [0, horizon].
std::pair<double, double> ReferenceRange(const ReferenceSignal& sig,
                                         double horizon);

/// max r <= rho(0) and -min r <= rho(1) over [0, horizon], within tol.
bool ReferenceAdmissible(const ReferenceSignal& sig, const Vector& rho,
                         double horizon, double tol);

/// Two-tank test profile: 0.01 t up to 30 s, then falling linearly to -0.2
/// at 100 s, constant afterwards. Coefficients are exact so the pieces join.
PiecewiseRamp TwoTankProfile();

}  // namespace rpitrack::sim
