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

#include "rpitrack/synth/synthesis.h"

namespace rpitrack::synth::internal {

/// Multipliers-phase LP at fixed (l_cl, rho): gains, X_I, multipliers and
/// gamma free. nullopt when the LP has no optimum or breaks down.
std::optional<certify::Certificate> SolveMultipliersPhase(const SynthesisProblem& problem,
                                                          const SynthesisOptions& opts,
                                                          const Matrix& l_cl,
                                                          const Vector& rho);

}  // namespace rpitrack::synth::internal
