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

#include <cstdint>
#include <string>
#include <vector>

#include "rpitrack/certify/certificate.h"
#include "rpitrack/sim/reference.h"

namespace rpitrack::certify {

struct FalsifyOptions {
  int n_samples = 100;
  double horizon = 300.0;
  double dt = 1e-3;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  /// Violations recorded per rollout before the rollout stops reporting.
  int max_reports_per_sample = 4;
};

struct FalsifyViolation {
  enum class Kind { kInvariant, kState, kInput };
  Kind kind;
  int sample;
  double t;
  Eigen::Index row;
  double margin;
  Vector x_cl;
};

const char* ToString(FalsifyViolation::Kind kind);

/// One rollout setup: initial state on the boundary of L and an admissible
/// reference signal.
struct FalsifyScenario {
  Vector x0;
  sim::ReferenceSignal reference;
  std::string label;
};

/// Deterministic scenarios for `cert`: starts are random convex combinations
/// of one to three vertices of L (n_cl <= 4) or support points along random
/// directions, pushed radially onto the boundary. References cycle through
/// the two extreme constants of R(rho), triangle waves between them, and
/// centered sinusoids (at the class frequency for the sinusoid class).
std::vector<FalsifyScenario> FalsifyScenarios(const Certificate& cert,
                                              const model::ReferenceClass& ref,
                                              const FalsifyOptions& opts);

/// Simulates every scenario and returns each sample where L_cl x_cl,
/// X_cl x_cl or U u exceeds 1 + tol. Never throws for a certificate that
/// passes CheckCertificate; a diverging rollout is reported as a violation.
std::vector<FalsifyViolation> FalsifyBySimulation(
    const Certificate& cert, const model::PlantModel& plant,
    const model::StateConstraint& xc, const model::InputConstraint& uc,
    const model::ReferenceClass& ref, const FalsifyOptions& opts = {});

}  // namespace rpitrack::certify
