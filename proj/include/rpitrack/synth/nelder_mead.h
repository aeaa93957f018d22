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

#include <functional>

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::synth {

struct NelderMeadOptions {
  int max_evals = 1000;
  /// Edge length of the initial simplex along each axis.
  double initial_step = 0.5;
  /// Stops once the spread of simplex values falls below this.
  double f_tol = 1e-10;
};

struct NelderMeadResult {
  Vector x;
  double f = 0.0;
  int evals = 0;
};

/// Derivative-free minimization with the standard reflection, expansion,
/// contraction and shrink coefficients (1, 2, 1/2, 1/2). `f` may return
/// +infinity to reject a point.
NelderMeadResult NelderMeadMinimize(const std::function<double(const Vector&)>& f,
                                    const Vector& x0, const NelderMeadOptions& opts);

}  // namespace rpitrack::synth
