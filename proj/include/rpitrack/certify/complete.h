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

#include "rpitrack/certify/certificate.h"
#include "rpitrack/certify/multiplier_lp.h"

namespace rpitrack::certify {

struct Completion {
  numlin::LpStatus status = numlin::LpStatus::kInfeasible;
  std::optional<Certificate> cert;  // present iff the LP was solved

  bool feasible() const { return cert.has_value(); }
};

/// Finds (H, H_r, T, Q, Q_r, V, gamma) for fixed gains, invariant set, rho
/// and integral bounds, maximizing gamma. V is the left inverse of L_cl.
///
/// Throws DimensionMismatch, RankDeficient or Unbounded when `inv` is not a
/// valid invariant set candidate.
Completion CompleteCertificate(const model::ControllerGains& gains,
                               const InvariantSet& inv, const Vector& rho,
                               const model::IntegralBounds& xi,
                               const model::PlantModel& plant,
                               const model::StateConstraint& xc,
                               const model::InputConstraint& uc,
                               const model::ReferenceClass& ref,
                               const VariableBoxes& boxes = {});

}  // namespace rpitrack::certify
