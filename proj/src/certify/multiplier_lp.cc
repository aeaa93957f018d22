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

#include "rpitrack/certify/multiplier_lp.h"

#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"
#include "rpitrack/numlin/lp_builder.h"

namespace rpitrack::certify {

using numlin::LpBuilder;

std::vector<model::ControllerGains> GainBasis(Eigen::Index m) {
  std::vector<model::ControllerGains> basis;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int block = 0; block < 4; ++block) {
      model::ControllerGains g = model::ControllerGains::Zero(m);
      Vector* target[] = {&g.k, &g.k_i1, &g.k_i2, &g.k_r};
      (*target[block])[j] = 1.0;
      basis.push_back(std::move(g));
    }
  }
  return basis;
}

model::ControllerGains GainsFromCoefficients(const Vector& coef, Eigen::Index m) {
  if (coef.size() != 4 * m) {
    throw DimensionMismatch("GainsFromCoefficients: expected 4 m coefficients");
  }
  model::ControllerGains g = model::ControllerGains::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    g.k[j] = coef[4 * j];
    g.k_i1[j] = coef[4 * j + 1];
    g.k_i2[j] = coef[4 * j + 2];
    g.k_r[j] = coef[4 * j + 3];
  }
  return g;
}

namespace {

using numlin::VarBlock;

VarBlock AddBlock(LpBuilder& b, Eigen::Index rows, Eigen::Index cols, VarBox box) {
  return numlin::AddVarBlock(b, rows, cols, box.lo, box.hi);
}

}  // namespace

MultiplierLpResult SolveMultiplierLp(const MultiplierLp& lp) {
  if (lp.plant == nullptr || lp.xc == nullptr || lp.uc == nullptr) {
    throw DimensionMismatch("SolveMultiplierLp: missing problem data");
  }
  const model::PlantModel& plant = *lp.plant;
  const Eigen::Index n = plant.n();
  const Eigen::Index m = plant.m();
  const Eigen::Index n_cl = n + 2;
  const Eigen::Index l = lp.l_cl.rows();
  const Eigen::Index l_x = lp.xc->x_mat.rows();
  const Eigen::Index l_u = lp.uc->u_mat.rows();
  lp.xc->Validate(n);
  lp.uc->Validate(m);
  numlin::RequireShape(lp.l_cl, l, n_cl, "SolveMultiplierLp: l_cl");
  numlin::RequireShape(lp.rho, 2, 1, "SolveMultiplierLp: rho");
  numlin::RequireFinite(lp.l_cl, "SolveMultiplierLp: l_cl");
  const Matrix& lc = lp.l_cl;
  const Matrix& u_mat = lp.uc->u_mat;
  const VariableBoxes& bx = lp.boxes;

  model::ReferenceClass ref;
  ref.alpha = lp.alpha;

  // A_cl(g) = A_0 + sum_p g_p A_p, likewise B_cl and the input map.
  const bool gains_free = !lp.fixed_gains.has_value();
  const model::ControllerGains base =
      gains_free ? model::ControllerGains::Zero(m) : *lp.fixed_gains;
  const model::ClosedLoop cl0 = model::BuildClosedLoop(plant, base, ref);
  const Matrix umap0 = u_mat * model::InputConstraintMap(base, plant);
  std::vector<Matrix> a_parts, b_parts, u_parts;
  if (gains_free) {
    const model::ClosedLoop zero = cl0;
    for (const model::ControllerGains& g : GainBasis(m)) {
      const model::ClosedLoop cl = model::BuildClosedLoop(plant, g, ref);
      a_parts.push_back(cl.a_cl - zero.a_cl);
      b_parts.push_back(cl.b_cl - zero.b_cl);
      u_parts.push_back(u_mat * model::InputConstraintMap(g, plant));
    }
  }
  const Eigen::Index n_gain = static_cast<Eigen::Index>(a_parts.size());

  LpBuilder b;
  const VarBlock h = AddBlock(b, l, l, bx.h_offdiag);
  for (Eigen::Index i = 0; i < l; ++i) b.SetBounds(h(i, i), bx.h_diag.lo, bx.h_diag.hi);
  const VarBlock h_r = AddBlock(b, l, 2, bx.h_r);
  const VarBlock t = AddBlock(b, l_x + 4, l, bx.t);
  const VarBlock q = AddBlock(b, l_u, l, bx.q);
  const VarBlock q_r = AddBlock(b, l_u, 2, bx.q_r);
  const VarBlock gain = AddBlock(b, 1, n_gain, bx.gains);
  const bool xi_free = !lp.fixed_xi.has_value();
  const VarBlock xi = xi_free ? AddBlock(b, 1, 4, bx.xi) : VarBlock{};
  const Eigen::Index gamma = b.AddVar(bx.gamma.lo, bx.gamma.hi);
  b.AddCost(gamma, -lp.gamma_weight);
  if (xi_free && lp.xi_weight != 0.0) {
    for (int k = 0; k < 4; ++k) b.AddCost(xi(0, k), -lp.xi_weight);
  }

  const double slack = lp.eq_slack;
  LpBuilder::Terms terms;

  // H L_cl - L_cl A_cl(g) = 0 and H_r R - L_cl B_cl(g) = 0.
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (lc(k, j) != 0.0) terms.emplace_back(h(i, k), lc(k, j));
      }
      for (Eigen::Index p = 0; p < n_gain; ++p) {
        const double c = lc.row(i).dot(a_parts[p].col(j));
        if (c != 0.0) terms.emplace_back(gain(0, p), -c);
      }
      b.AddEqRelaxed(terms, lc.row(i).dot(cl0.a_cl.col(j)), slack);
    }
    terms.assign({{h_r(i, 0), 1.0}, {h_r(i, 1), -1.0}});
    for (Eigen::Index p = 0; p < n_gain; ++p) {
      const double c = lc.row(i).dot(b_parts[p].col(0));
      if (c != 0.0) terms.emplace_back(gain(0, p), -c);
    }
    b.AddEqRelaxed(terms, lc.row(i).dot(cl0.b_cl.col(0)), slack);

    // H 1 + H_r rho + gamma <= 0.
    terms.clear();
    for (Eigen::Index k = 0; k < l; ++k) terms.emplace_back(h(i, k), 1.0);
    terms.emplace_back(h_r(i, 0), lp.rho[0]);
    terms.emplace_back(h_r(i, 1), lp.rho[1]);
    terms.emplace_back(gamma, 1.0);
    b.AddLe(terms, 0.0);
  }

  // T L_cl = blockdiag(X, X_I), T 1 <= 1.
  const Matrix xi_fixed =
      xi_free ? Matrix::Zero(4, 2) : lp.fixed_xi->AsMatrix();
  for (Eigen::Index r = 0; r < l_x + 4; ++r) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (lc(k, j) != 0.0) terms.emplace_back(t(r, k), lc(k, j));
      }
      double rhs = 0.0;
      if (r < l_x) {
        if (j < n) rhs = lp.xc->x_mat(r, j);
      } else {
        const Eigen::Index xr = r - l_x;  // 0..3
        if (j == n + xr / 2) {
          if (xi_free) {
            terms.emplace_back(xi(0, xr), xr % 2 == 0 ? -1.0 : 1.0);
          } else {
            rhs = xi_fixed(xr, xr / 2);
          }
        }
      }
      b.AddEqRelaxed(terms, rhs, slack);
    }
    terms.clear();
    for (Eigen::Index k = 0; k < l; ++k) terms.emplace_back(t(r, k), 1.0);
    b.AddLe(terms, 1.0);
  }

  // Q L_cl = U [K C, K_I1, K_I2], Q_r R = U K_r, Q 1 + Q_r rho <= 1.
  for (Eigen::Index r = 0; r < l_u; ++r) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (lc(k, j) != 0.0) terms.emplace_back(q(r, k), lc(k, j));
      }
      for (Eigen::Index p = 0; p < n_gain; ++p) {
        const double c = u_parts[p](r, j);
        if (c != 0.0) terms.emplace_back(gain(0, p), -c);
      }
      b.AddEqRelaxed(terms, umap0(r, j), slack);
    }
    terms.assign({{q_r(r, 0), 1.0}, {q_r(r, 1), -1.0}});
    for (Eigen::Index p = 0; p < n_gain; ++p) {
      const double c = u_parts[p](r, n_cl);
      if (c != 0.0) terms.emplace_back(gain(0, p), -c);
    }
    b.AddEqRelaxed(terms, umap0(r, n_cl), slack);
    terms.clear();
    for (Eigen::Index k = 0; k < l; ++k) terms.emplace_back(q(r, k), 1.0);
    terms.emplace_back(q_r(r, 0), lp.rho[0]);
    terms.emplace_back(q_r(r, 1), lp.rho[1]);
    b.AddLe(terms, 1.0);
  }

  const numlin::LpOutcome out = numlin::SolveLp(b.Build());
  MultiplierLpResult result;
  result.status = out.status;
  if (!out.optimal()) return result;
  const Vector& x = *out.solution;

  Certificate cert;
  cert.gains = gains_free
                   ? GainsFromCoefficients(numlin::ExtractBlock(x, gain).transpose(), m)
                   : *lp.fixed_gains;
  cert.inv.l_cl = lc;
  cert.h = numlin::ExtractBlock(x, h);
  cert.h_r = numlin::ExtractBlock(x, h_r);
  cert.t = numlin::ExtractBlock(x, t);
  cert.q = numlin::ExtractBlock(x, q);
  cert.q_r = numlin::ExtractBlock(x, q_r);
  cert.v = numlin::LeftInverse(lc);
  cert.gamma = x[gamma];
  if (xi_free) {
    cert.xi = {x[xi(0, 0)], x[xi(0, 1)], x[xi(0, 2)], x[xi(0, 3)]};
  } else {
    cert.xi = *lp.fixed_xi;
  }
  cert.rho = lp.rho;
  result.cert = std::move(cert);
  return result;
}

}  // namespace rpitrack::certify
