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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rpitrack/certify/certificate.h"
#include "rpitrack/certify/multiplier_lp.h"

namespace rpitrack::synth {

/// kPhi1 maximizes rho_1 + rho_2. kPhi2 maximizes
/// x_i11 + x_i21 + x_i12 + x_i22, which tightens the integral-error bounds.
enum class Objective { kPhi1, kPhi2 };
enum class Phase { kMultipliers, kGeometry };

const char* ToString(Objective objective);
const char* ToString(Phase phase);

/// Plant, constraints and reference class (alpha, omega; ref.rho unused).
struct SynthesisProblem {
  model::PlantModel plant;
  model::StateConstraint xc;
  model::InputConstraint uc;
  model::ReferenceClass ref;
};

struct SynthesisOptions {
  Objective objective = Objective::kPhi1;
  Eigen::Index l_rows = 9;
  certify::VariableBoxes var_box;
  int max_outer_iters = 200;
  int restarts = 20;
  std::uint64_t rng_seed = 1;
  double conv_tol = 1e-6;
  /// Weight of gamma in the merit Phi + mu gamma.
  double mu = 1e-3;
  /// Element-wise bounds on rho. Under kPhi2 rho_min is the reference set
  /// the controller must admit.
  Vector rho_min = Vector::Constant(2, 1e-4);
  Vector rho_max = Vector::Constant(2, 10.0);
  /// Every accepted iterate passes CheckCertificate at this tolerance.
  double check_tol = certify::kEqualityTol;
  /// Slack of V L_cl = I inside the geometry LP.
  double rank_tol = 1e-9;

  /// Gain candidates are drawn uniformly from [-gain_sample_range,
  /// gain_sample_range] intersected with var_box.gains.
  double gain_sample_range = 10.0;
  int gain_candidates = 100;
  int max_gain_attempts = 20000;
  /// Nelder-Mead budget for polishing the best candidate.
  int polish_evals = 1500;

  /// Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws InvalidOptions.
  void Validate(Eigen::Index n_cl) const;
};

/// A certified point of the alternating scheme.
struct Iterate {
  certify::Certificate cert;
  double merit = 0.0;
};

/// Phi1 = rho_1 + rho_2, Phi2 = sum of the four integral-bound entries.
double ObjectiveValue(const certify::Certificate& cert, Objective objective);
/// Phi + mu gamma.
double Merit(const certify::Certificate& cert, Objective objective, double mu);

/// Certified starting point for one restart.
///
/// Samples gains uniformly until the closed loop is Hurwitz, scores each
/// sample by the largest reference set a polytope in modal coordinates can
/// certify, polishes the best sample with Nelder-Mead and builds L_cl from
/// that polytope: a box, or with fewer than 2 n_cl rows a box whose fast
/// lower faces are replaced by one closing face. The multipliers then come
/// from one multipliers-phase LP.
///
/// Throws NoStabilizingGains when sampling exhausts its attempts and
/// NoFeasiblePoint when no modal polytope certifies the required rho.
Iterate Initialize(const SynthesisProblem& problem, const SynthesisOptions& opts,
                   int restart_index);

/// One LP of the alternating scheme.
///
/// kMultipliers fixes (L_cl, rho) and solves for the gains, X_I, all
/// multipliers and gamma. kGeometry fixes the gains and the multipliers and
/// solves for (L_cl, rho, X_I, gamma) with V held inside
/// |V L_cl - I| <= rank_tol, then refreshes V to the left inverse of L_cl.
/// Both maximize the merit; the returned iterate is not yet checked.
///
/// Throws PhaseInfeasible when the LP has no optimum, the solver breaks
/// down, or the new L_cl has no left inverse.
Iterate AlternateStep(const SynthesisProblem& problem, const SynthesisOptions& opts,
                      const Iterate& current, Phase phase);

/// True iff the certificate passes CheckCertificate at opts.check_tol and
/// respects opts.var_box.v_abs.
bool Acceptable(const SynthesisProblem& problem, const SynthesisOptions& opts,
                const certify::Certificate& cert);

struct SynthesisResult {
  certify::Certificate cert;
  double objective_value = 0.0;
  double merit = 0.0;
  /// Objective and merit after initialization and after every sweep.
  std::vector<double> history;
  std::vector<double> merit_history;
  int restart_index = 0;
  int iterations = 0;
  /// False when max_outer_iters ended the winning restart.
  bool converged = false;
};

/// One structured line per phase:
///   restart=R iter=I phase=P status=S merit=M gamma=G
using SynthesisLog = std::function<void(const std::string&)>;

/// Runs opts.restarts independent restarts (restart r seeds its generator
/// with rng_seed + r) and returns the best certified point; ties go to the
/// larger gamma, then the lower restart index. Restarts run concurrently;
/// the result and the log order do not depend on the thread count.
///
/// Throws InvalidOptions, InvalidModel when the reference class hits a
/// transmission zero, and NoFeasiblePoint when no restart certifies a point.
SynthesisResult Synthesize(const SynthesisProblem& problem, const SynthesisOptions& opts,
                           const SynthesisLog& log = {});

}  // namespace rpitrack::synth
