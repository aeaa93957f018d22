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

#include "rpitrack/certify/complete.h"

#include "rpitrack/errors.h"

namespace rpitrack::certify {

Completion CompleteCertificate(const model::ControllerGains& gains,
                               const InvariantSet& inv, const Vector& rho,
                               const model::IntegralBounds& xi,
                               const model::PlantModel& plant,
                               const model::StateConstraint& xc,
                               const model::InputConstraint& uc,
                               const model::ReferenceClass& ref,
                               const VariableBoxes& boxes) {
  gains.Validate(plant.m());
  numlin::RequireShape(inv.l_cl, inv.rows(), plant.n() + 2, "CompleteCertificate: l_cl");
  inv.Validate();

  MultiplierLp lp;
  lp.plant = &plant;
  lp.xc = &xc;
  lp.uc = &uc;
  lp.alpha = ref.alpha;
  lp.l_cl = inv.l_cl;
  lp.rho = rho;
  lp.fixed_gains = gains;
  lp.fixed_xi = xi;
  lp.boxes = boxes;
  // Completion is a pure feasibility question; only the Metzler and sign
  // patterns constrain the multipliers.
  lp.boxes.h_offdiag.hi = numlin::kInf;
  lp.boxes.h_diag = {-numlin::kInf, numlin::kInf};
  lp.boxes.h_r.hi = numlin::kInf;
  lp.boxes.t.hi = numlin::kInf;
  lp.boxes.q.hi = numlin::kInf;
  lp.boxes.q_r.hi = numlin::kInf;

  const MultiplierLpResult res = SolveMultiplierLp(lp);
  Completion out;
  out.status = res.status;
  out.cert = res.cert;
  return out;
}

}  // namespace rpitrack::certify
