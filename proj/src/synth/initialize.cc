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


#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "phases.h"
#include "rpitrack/errors.h"
#include "rpitrack/numlin/lp_builder.h"
#include "rpitrack/numlin/stability.h"
#include "rpitrack/synth/nelder_mead.h"

namespace rpitrack::synth {

namespace {

using numlin::LpBuilder;
using numlin::VarBlock;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Decay margin built into the modal seed.
constexpr double kSeedGamma = 1e-4;
// Largest tolerated condition number of the modal basis.
constexpr double kMaxModalCondition = 1e8;
// Cost of the elastic excess on the inclusion rows; it gives the gain
// search a slope towards certifiable gains.
constexpr double kElasticPenalty = 100.0;
// Largest elastic excess of a usable seed.
constexpr double kElasticTol = 1e-9;
// Inclusion rows of the seed hold with this much room, which absorbs the
// rounding of the modal basis.
constexpr double kSeedInclusionMargin = 1e-6;

// Polytope in modal coordinates z = w x_cl, w holding left eigenvectors of
// A_cl with unit max-norm rows:
//   z_i <= c_plus_i        for every mode,
//   -z_i <= c_minus_i      for the modes outside `merged`,
//   -sum_{j in merged} z_j <= s.
// `merged` is empty (a box) unless fewer than 2 n_cl rows are requested.
struct ModalSeed {
  Matrix w;
  Matrix s_inv;  // inverse of w
  Vector lambda;
  std::vector<Eigen::Index> lower;   // modes with a lower face, slowest first
  std::vector<Eigen::Index> merged;  // modes closed by the single face
  Vector c_plus;
  Vector c_minus;
  double s = 0.0;
  Vector rho;
  double excess = 0.0;  // elastic slack on the inclusion rows
  double score = 0.0;   // objective minus kElasticPenalty * excess
  bool usable() const { return excess <= kElasticTol; }
};

double Pos(double v) { return std::max(v, 0.0); }
double Neg(double v) { return std::max(-v, 0.0); }

// Terms bounding max a z over the polytope. Outside `merged` this is exact;
// on `merged` it uses the multiplier t = max_j (-a_j)^+ on the closing face,
// which leaves a_j + t >= 0 on each upper face.
void AddSupport(LpBuilder::Terms& terms, const RowVector& a, const VarBlock& cp,
                const VarBlock& cm, const std::vector<char>& is_merged, Eigen::Index s_var) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (is_merged[i]) t = std::max(t, -a[i]);
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (is_merged[i]) {
      if (a[i] + t > 0.0) terms.emplace_back(cp(0, i), a[i] + t);
    } else if (a[i] > 0.0) {
      terms.emplace_back(cp(0, i), a[i]);
    } else if (a[i] < 0.0) {
      terms.emplace_back(cm(0, i), -a[i]);
    }
  }
  if (t > 0.0) terms.emplace_back(s_var, t);
}

// Largest reference set (Phi1: rho_1 + rho_2; Phi2: multiple of rho_min) a
// modal polytope certifies under `gains`, with X_I at its lower bound and
// the inclusion rows relaxed by an elastic excess. nullopt for complex,
// repeated or too fast modes.
std::optional<ModalSeed> SolveModalSeed(const SynthesisProblem& p, const SynthesisOptions& o,
                                        const model::ControllerGains& gains) {
  const model::ClosedLoop cl = model::BuildClosedLoop(p.plant, gains, p.ref);
  const Eigen::Index n = p.plant.n();
  const Eigen::Index n_cl = cl.n_cl();
  if (!cl.a_cl.allFinite()) return std::nullopt;
  Eigen::EigenSolver<Matrix> es(cl.a_cl);
  if (es.info() != Eigen::Success) return std::nullopt;

  ModalSeed seed;
  seed.lambda.resize(n_cl);
  for (Eigen::Index i = 0; i < n_cl; ++i) {
    const std::complex<double> ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-9 * (1.0 + std::abs(ev))) return std::nullopt;
    if (ev.real() + kSeedGamma >= 0.0 || ev.real() < o.var_box.h_diag.lo) return std::nullopt;
    seed.lambda[i] = ev.real();
  }
  Eigen::FullPivLU<Matrix> lu(es.eigenvectors().real());
  if (!lu.isInvertible()) return std::nullopt;
  seed.w = lu.inverse();
  for (Eigen::Index i = 0; i < n_cl; ++i) {
    const double scale = seed.w.row(i).cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) return std::nullopt;
    seed.w.row(i) /= scale;
  }
  seed.s_inv = seed.w.fullPivLu().inverse();
  const double cond = seed.w.cwiseAbs().rowwise().sum().maxCoeff() *
                      seed.s_inv.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(cond) || cond > kMaxModalCondition) return std::nullopt;

  std::vector<Eigen::Index> order(n_cl);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return seed.lambda[a] > seed.lambda[b];
  });
  const Eigen::Index kept = o.l_rows >= 2 * n_cl ? n_cl : o.l_rows - n_cl - 1;
  seed.lower.assign(order.begin(), order.begin() + kept);
  seed.merged.assign(order.begin() + kept, order.end());
  std::vector<char> is_merged(n_cl, 0);
  for (Eigen::Index j : seed.merged) is_merged[j] = 1;

  const Vector b_hat = seed.w * cl.b_cl;
  const certify::VariableBoxes& bx = o.var_box;

  LpBuilder b;
  const VarBlock cp = numlin::AddVarBlock(b, 1, n_cl, 0.0, kInf);
  const VarBlock cm = numlin::AddVarBlock(b, 1, n_cl, 0.0, 0.0);
  for (Eigen::Index i = 0; i < n_cl; ++i) {
    // |L| <= l.hi and H_r <= h_r.hi on the face rows w_i / c.
    const double lo = std::max({1.0 / bx.l.hi, std::abs(b_hat[i]) / bx.h_r.hi, 1e-12});
    b.SetBounds(cp(0, i), lo, kInf);
    if (!is_merged[i]) b.SetBounds(cm(0, i), lo, kInf);
  }
  Eigen::Index s_var = b.AddVar(0.0, 0.0);
  RowVector closing = RowVector::Zero(n_cl);
  double beta = 0.0;  // reference coefficient of the closing face
  if (!seed.merged.empty()) {
    for (Eigen::Index j : seed.merged) {
      closing -= seed.w.row(j);
      beta -= b_hat[j];
    }
    const double lo =
        std::max({closing.cwiseAbs().maxCoeff() / bx.l.hi, std::abs(beta) / bx.h_r.hi, 1e-12});
    b.SetBounds(s_var, lo, kInf);
  }

  const bool phi1 = o.objective == Objective::kPhi1;
  const VarBlock rho = numlin::AddVarBlock(b, 1, 2, 0.0, 0.0);
  Eigen::Index scale = -1;
  if (phi1) {
    for (int k = 0; k < 2; ++k) {
      b.SetBounds(rho(0, k), o.rho_min[k], o.rho_max[k]);
      b.AddCost(rho(0, k), -1.0);
    }
  } else {
    const double s_max = o.rho_max.cwiseQuotient(o.rho_min).minCoeff();
    scale = b.AddVar(0.0, s_max, -1.0);
    for (int k = 0; k < 2; ++k) {
      b.SetBounds(rho(0, k), 0.0, o.rho_max[k]);
      b.AddEq({{rho(0, k), 1.0}, {scale, -o.rho_min[k]}}, 0.0);
    }
  }

  const Eigen::Index excess = b.AddVar(0.0, kInf, kElasticPenalty);

  LpBuilder::Terms terms;
  // Faces: (lambda + gamma) c + H_r rho c <= 0.
  for (Eigen::Index i = 0; i < n_cl; ++i) {
    const double decay = seed.lambda[i] + kSeedGamma;
    b.AddLe({{cp(0, i), decay}, {rho(0, 0), Pos(b_hat[i])}, {rho(0, 1), Neg(b_hat[i])}}, 0.0);
    if (!is_merged[i]) {
      b.AddLe({{cm(0, i), decay}, {rho(0, 0), Neg(b_hat[i])}, {rho(0, 1), Pos(b_hat[i])}},
              0.0);
    }
  }
  // Closing face: H has h0 on its diagonal and (h0 - lambda_j) c_j / s
  // towards the upper faces of the merged modes.
  if (!seed.merged.empty()) {
    const double h0 = seed.lambda[seed.merged.front()];
    terms.assign({{s_var, h0 + kSeedGamma}, {rho(0, 0), Pos(beta)}, {rho(0, 1), Neg(beta)}});
    for (Eigen::Index j : seed.merged) {
      const double gap = h0 - seed.lambda[j];
      if (gap > 0.0) {
        terms.emplace_back(cp(0, j), gap);
        b.AddLe({{cp(0, j), gap}, {s_var, -bx.h_offdiag.hi}}, 0.0);
      }
    }
    b.AddLe(terms, 0.0);
  }
  // X x <= 1.
  const Matrix& x_mat = p.xc.x_mat;
  for (Eigen::Index r = 0; r < x_mat.rows(); ++r) {
    terms.clear();
    AddSupport(terms, x_mat.row(r) * seed.s_inv.topRows(n), cp, cm, is_merged, s_var);
    terms.emplace_back(excess, -1.0);
    b.AddLe(terms, 1.0 - kSeedInclusionMargin);
  }
  // |x_I| within the bounds implied by X_I at its lower bound.
  for (int k = 0; k < 2; ++k) {
    for (double sign : {1.0, -1.0}) {
      terms.clear();
      AddSupport(terms, sign * seed.s_inv.row(n + k), cp, cm, is_merged, s_var);
      terms.emplace_back(excess, -1.0 / bx.xi.lo);
      b.AddLe(terms, (1.0 - kSeedInclusionMargin) / bx.xi.lo);
    }
  }
  // U u <= 1.
  const Matrix umap = p.uc.u_mat * model::InputConstraintMap(gains, p.plant);
  for (Eigen::Index r = 0; r < umap.rows(); ++r) {
    terms.clear();
    AddSupport(terms, umap.row(r).head(n_cl) * seed.s_inv, cp, cm, is_merged, s_var);
    terms.emplace_back(rho(0, 0), Pos(umap(r, n_cl)));
    terms.emplace_back(rho(0, 1), Neg(umap(r, n_cl)));
    terms.emplace_back(excess, -1.0);
    b.AddLe(terms, 1.0 - kSeedInclusionMargin);
  }

  numlin::LpOutcome out;
  try {
    out = numlin::SolveLp(b.Build());
  } catch (const NumericalBreakdown&) {
    return std::nullopt;
  }
  if (!out.optimal()) return std::nullopt;
  const Vector& x = *out.solution;
  seed.c_plus = numlin::ExtractBlock(x, cp).transpose();
  seed.c_minus = numlin::ExtractBlock(x, cm).transpose();
  seed.s = x[s_var];
  seed.rho = numlin::ExtractBlock(x, rho).transpose();
  seed.excess = x[excess];
  seed.score = (phi1 ? seed.rho.sum() : x[scale]) - kElasticPenalty * seed.excess;
  return seed;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every
// standard library.
double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Face rows of the seed polytope. Rows beyond 2 n_cl average the upper
// faces of two neighbouring modes, which keeps them redundant without
// making them parallel to an existing row.
Matrix SeedRows(const ModalSeed& seed, Eigen::Index l_rows) {
  const Eigen::Index n_cl = seed.w.rows();
  Matrix l_cl(l_rows, n_cl);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n_cl; ++i) l_cl.row(row++) = seed.w.row(i) / seed.c_plus[i];
  for (Eigen::Index i : seed.lower) l_cl.row(row++) = -seed.w.row(i) / seed.c_minus[i];
  if (!seed.merged.empty()) {
    RowVector closing = RowVector::Zero(n_cl);
    for (Eigen::Index j : seed.merged) closing -= seed.w.row(j);
    l_cl.row(row++) = closing / seed.s;
  }
  for (Eigen::Index e = 0; row < l_rows; ++e) {
    l_cl.row(row++) = 0.5 * (l_cl.row(e % n_cl) + l_cl.row((e + 1) % n_cl));
  }
  return l_cl;
}

}  // namespace

Iterate Initialize(const SynthesisProblem& problem, const SynthesisOptions& opts,
                   int restart_index) {
  const Eigen::Index m = problem.plant.m();
  opts.Validate(problem.plant.n() + 2);
  std::mt19937_64 rng(opts.rng_seed + static_cast<std::uint64_t>(restart_index));

  const double lo = std::max(opts.var_box.gains.lo, -opts.gain_sample_range);
  const double hi = std::min(opts.var_box.gains.hi, opts.gain_sample_range);
  if (lo > hi) throw NoStabilizingGains("Initialize: empty gain sampling box");
  const Eigen::Index dim = 4 * m;
  auto in_box = [&](const Vector& coef) {
    return (coef.array() >= opts.var_box.gains.lo).all() &&
           (coef.array() <= opts.var_box.gains.hi).all();
  };

  std::vector<Vector> candidates;
  int attempts = 0;
  while (attempts < opts.max_gain_attempts &&
         static_cast<int>(candidates.size()) < opts.gain_candidates) {
    ++attempts;
    Vector coef(dim);
    for (Eigen::Index i = 0; i < dim; ++i) coef[i] = lo + (hi - lo) * Unit(rng);
    const model::ClosedLoop cl = model::BuildClosedLoop(
        problem.plant, certify::GainsFromCoefficients(coef, m), problem.ref);
    if (numlin::IsHurwitz(cl.a_cl, certify::kHurwitzMargin)) candidates.push_back(coef);
  }
  if (candidates.empty()) {
    throw NoStabilizingGains("Initialize: no stabilizing gains in " +
                             std::to_string(attempts) + " samples");
  }

  auto score = [&](const Vector& coef) -> double {
    if (!in_box(coef)) return -kInf;
    const auto seed = SolveModalSeed(problem, opts, certify::GainsFromCoefficients(coef, m));
    return seed ? seed->score : -kInf;
  };
  Vector best = candidates.front();
  double best_score = -kInf;
  for (const Vector& coef : candidates) {
    const double s = score(coef);
    if (s > best_score) {
      best_score = s;
      best = coef;
    }
  }
  if (!std::isfinite(best_score)) {
    throw NoFeasiblePoint("Initialize: no sampled gains admit a modal seed");
  }

  const double steps[] = {1.0, 0.3, 0.1};
  for (double step : steps) {
    NelderMeadOptions nm;
    nm.max_evals = opts.polish_evals / 3;
    nm.initial_step = step * (hi - lo) / 20.0;
    const NelderMeadResult r = NelderMeadMinimize(
        [&](const Vector& coef) { return -score(coef); }, best, nm);
    if (-r.f > best_score) {
      best_score = -r.f;
      best = r.x;
    }
  }

  const model::ControllerGains gains = certify::GainsFromCoefficients(best, m);
  const std::optional<ModalSeed> seed = SolveModalSeed(problem, opts, gains);
  if (!seed || !seed->usable()) {
    throw NoFeasiblePoint("Initialize: no sampled gains admit a certifiable modal seed");
  }
  if (opts.objective == Objective::kPhi2 && seed->score < 1.0) {
    throw NoFeasiblePoint("Initialize: rho_min is not certifiable by a modal seed");
  }
  const Vector rho = opts.objective == Objective::kPhi1 ? seed->rho : opts.rho_min;
  const std::optional<certify::Certificate> cert =
      internal::SolveMultipliersPhase(problem, opts, SeedRows(*seed, opts.l_rows), rho);
  if (cert && Acceptable(problem, opts, *cert)) {
    return {*cert, Merit(*cert, opts.objective, opts.mu)};
  }
  throw NoFeasiblePoint("Initialize: the multipliers LP rejects the seeded set");
}

}  // namespace rpitrack::synth
