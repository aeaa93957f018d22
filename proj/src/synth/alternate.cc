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


#include <cmath>
#include <limits>
#include <string>

#include "phases.h"
#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"
#include "rpitrack/numlin/lp_builder.h"

namespace rpitrack::synth {

using numlin::LpBuilder;
using numlin::VarBlock;

const char* ToString(Objective objective) {
  return objective == Objective::kPhi1 ? "phi1" : "phi2";
}

const char* ToString(Phase phase) {
  return phase == Phase::kMultipliers ? "multipliers" : "geometry";
}

void SynthesisOptions::Validate(Eigen::Index n_cl) const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidOptions("SynthesisOptions: " + what);
  };
  require(l_rows > n_cl, "l_rows must exceed n_cl = " + std::to_string(n_cl));
  require(restarts >= 1, "restarts must be at least 1");
  require(max_outer_iters >= 0, "max_outer_iters must be non-negative");
  require(conv_tol > 0.0, "conv_tol must be positive");
  require(mu >= 0.0, "mu must be non-negative");
  require(check_tol > 0.0 && rank_tol > 0.0, "tolerances must be positive");
  require(rho_min.size() == 2 && rho_max.size() == 2, "rho bounds need 2 entries");
  require((rho_min.array() > 0.0).all() && (rho_max.array() >= rho_min.array()).all() &&
              rho_max.allFinite(),
          "need 0 < rho_min <= rho_max < inf");
  require(gain_sample_range > 0.0 && gain_candidates >= 1 && max_gain_attempts >= 1 &&
              polish_evals >= 0,
          "invalid gain search budget");
  require(threads >= 0, "threads must be non-negative");
  const certify::VariableBoxes& b = var_box;
  for (const certify::VarBox& v :
       {b.h_offdiag, b.h_diag, b.h_r, b.t, b.q, b.q_r, b.l, b.gains, b.xi, b.gamma}) {
    require(v.lo <= v.hi, "empty variable box");
  }
  require(b.h_offdiag.lo >= 0.0 && b.h_r.lo >= 0.0 && b.t.lo >= 0.0 && b.q.lo >= 0.0 &&
              b.q_r.lo >= 0.0,
          "multiplier boxes must be non-negative");
  require(b.l.hi > 0.0 && b.h_r.hi > 0.0, "l and h_r boxes must admit positive entries");
  require(b.xi.lo > 0.0, "xi box must be positive");
  require(b.gamma.lo >= certify::kGammaMin, "gamma box must reach kGammaMin");
  require(b.v_abs > 0.0, "v_abs must be positive");
}

double ObjectiveValue(const certify::Certificate& cert, Objective objective) {
  return objective == Objective::kPhi1 ? cert.rho[0] + cert.rho[1] : cert.xi.Sum();
}

double Merit(const certify::Certificate& cert, Objective objective, double mu) {
  return ObjectiveValue(cert, objective) + mu * cert.gamma;
}

bool Acceptable(const SynthesisProblem& problem, const SynthesisOptions& opts,
                const certify::Certificate& cert) {
  if (!cert.v.allFinite() || cert.v.cwiseAbs().maxCoeff() > opts.var_box.v_abs) return false;
  return certify::CheckCertificate(cert, problem.plant, problem.xc, problem.uc, problem.ref,
                                   opts.check_tol)
      .passed;
}

namespace internal {

std::optional<certify::Certificate> SolveMultipliersPhase(const SynthesisProblem& problem,
                                                          const SynthesisOptions& opts,
                                                          const Matrix& l_cl,
                                                          const Vector& rho) {
  certify::MultiplierLp lp;
  lp.plant = &problem.plant;
  lp.xc = &problem.xc;
  lp.uc = &problem.uc;
  lp.alpha = problem.ref.alpha;
  lp.l_cl = l_cl;
  lp.rho = rho;
  lp.boxes = opts.var_box;
  lp.gamma_weight = opts.mu;
  lp.xi_weight = opts.objective == Objective::kPhi2 ? 1.0 : 0.0;
  try {
    return certify::SolveMultiplierLp(lp).cert;
  } catch (const NumericalBreakdown&) {
    return std::nullopt;
  } catch (const RankDeficient&) {
    return std::nullopt;
  }
}

}  // namespace internal

namespace {

// LP over (L_cl, rho, X_I, gamma) with the gains and every multiplier fixed.
std::optional<certify::Certificate> SolveGeometryPhase(const SynthesisProblem& p,
                                                       const SynthesisOptions& o,
                                                       const certify::Certificate& cur) {
  const Eigen::Index n = p.plant.n();
  const Eigen::Index n_cl = n + 2;
  const Eigen::Index l = cur.l();
  const Eigen::Index l_x = p.xc.x_mat.rows();
  const Eigen::Index l_u = p.uc.u_mat.rows();
  const certify::VariableBoxes& bx = o.var_box;
  const model::ClosedLoop cl = model::BuildClosedLoop(p.plant, cur.gains, p.ref);
  const Matrix umap = p.uc.u_mat * model::InputConstraintMap(cur.gains, p.plant);
  const Matrix& h = cur.h;
  const Matrix& v = cur.v;

  LpBuilder b;
  const VarBlock lv = numlin::AddVarBlock(b, l, n_cl, bx.l.lo, bx.l.hi);
  const VarBlock rho = numlin::AddVarBlock(b, 1, 2, 0.0, 0.0);
  for (int k = 0; k < 2; ++k) b.SetBounds(rho(0, k), o.rho_min[k], o.rho_max[k]);
  const VarBlock xi = numlin::AddVarBlock(b, 1, 4, bx.xi.lo, bx.xi.hi);
  const Eigen::Index gamma = b.AddVar(bx.gamma.lo, bx.gamma.hi, -o.mu);
  if (o.objective == Objective::kPhi1) {
    b.AddCost(rho(0, 0), -1.0);
    b.AddCost(rho(0, 1), -1.0);
  } else {
    for (int k = 0; k < 4; ++k) b.AddCost(xi(0, k), -1.0);
  }

  const double slack = certify::kEqualitySlack;
  LpBuilder::Terms terms;
  for (Eigen::Index i = 0; i < l; ++i) {
    // H L_cl - L_cl A_cl = 0.
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (h(i, k) != 0.0) terms.emplace_back(lv(k, j), h(i, k));
      }
      for (Eigen::Index k = 0; k < n_cl; ++k) {
        if (cl.a_cl(k, j) != 0.0) terms.emplace_back(lv(i, k), -cl.a_cl(k, j));
      }
      b.AddEqRelaxed(terms, 0.0, slack);
    }
    // L_cl B_cl = H_r R.
    terms.clear();
    for (Eigen::Index k = 0; k < n_cl; ++k) {
      if (cl.b_cl(k, 0) != 0.0) terms.emplace_back(lv(i, k), cl.b_cl(k, 0));
    }
    b.AddEqRelaxed(terms, cur.h_r(i, 0) - cur.h_r(i, 1), slack);
    // H_r rho + gamma <= -H 1.
    b.AddLe({{rho(0, 0), cur.h_r(i, 0)}, {rho(0, 1), cur.h_r(i, 1)}, {gamma, 1.0}},
            -h.row(i).sum());
  }
  // V L_cl = I.
  for (Eigen::Index a = 0; a < n_cl; ++a) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (v(a, k) != 0.0) terms.emplace_back(lv(k, j), v(a, k));
      }
      b.AddEqRelaxed(terms, a == j ? 1.0 : 0.0, o.rank_tol);
    }
  }
  // T L_cl = blockdiag(X, X_I).
  for (Eigen::Index r = 0; r < l_x + 4; ++r) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (cur.t(r, k) != 0.0) terms.emplace_back(lv(k, j), cur.t(r, k));
      }
      double rhs = 0.0;
      if (r < l_x) {
        if (j < n) rhs = p.xc.x_mat(r, j);
      } else {
        const Eigen::Index xr = r - l_x;
        if (j == n + xr / 2) terms.emplace_back(xi(0, xr), xr % 2 == 0 ? -1.0 : 1.0);
      }
      b.AddEqRelaxed(terms, rhs, slack);
    }
  }
  // Q L_cl = U [K C, K_I1, K_I2] and Q 1 + Q_r rho <= 1.
  for (Eigen::Index r = 0; r < l_u; ++r) {
    for (Eigen::Index j = 0; j < n_cl; ++j) {
      terms.clear();
      for (Eigen::Index k = 0; k < l; ++k) {
        if (cur.q(r, k) != 0.0) terms.emplace_back(lv(k, j), cur.q(r, k));
      }
      b.AddEqRelaxed(terms, umap(r, j), slack);
    }
    b.AddLe({{rho(0, 0), cur.q_r(r, 0)}, {rho(0, 1), cur.q_r(r, 1)}}, 1.0 - cur.q.row(r).sum());
  }

  numlin::LpOutcome out;
  try {
    out = numlin::SolveLp(b.Build());
  } catch (const NumericalBreakdown&) {
    return std::nullopt;
  }
  if (!out.optimal()) return std::nullopt;
  const Vector& x = *out.solution;

  certify::Certificate next = cur;
  next.inv.l_cl = numlin::ExtractBlock(x, lv);
  next.rho = numlin::ExtractBlock(x, rho).transpose();
  next.xi = {x[xi(0, 0)], x[xi(0, 1)], x[xi(0, 2)], x[xi(0, 3)]};
  next.gamma = x[gamma];
  try {
    next.v = numlin::LeftInverse(next.inv.l_cl);
  } catch (const RankDeficient&) {
    return std::nullopt;
  }
  return next;
}

}  // namespace

Iterate AlternateStep(const SynthesisProblem& problem, const SynthesisOptions& opts,
                      const Iterate& current, Phase phase) {
  const certify::Certificate& cur = current.cert;
  const std::optional<certify::Certificate> next =
      phase == Phase::kMultipliers
          ? internal::SolveMultipliersPhase(problem, opts, cur.inv.l_cl, cur.rho)
          : SolveGeometryPhase(problem, opts, cur);
  if (!next) throw PhaseInfeasible(std::string("AlternateStep: ") + ToString(phase) +
                                   " LP has no optimum");
  return {*next, Merit(*next, opts.objective, opts.mu)};
}

}  // namespace rpitrack::synth
