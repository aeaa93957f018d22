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
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hand_certificate.h"
#include "rpitrack/certify/serialize.h"
#include "rpitrack/errors.h"
#include "rpitrack/numlin/stability.h"
#include "rpitrack/synth/nelder_mead.h"
#include "rpitrack/synth/synthesis.h"
#include "two_tank.h"

namespace rpitrack::synth {
namespace {

SynthesisProblem ScalarProblem() {
  return {testing::ScalarPlant(), testing::ScalarStates(), testing::ScalarInputs(),
          model::ReferenceClass::Ramp(Vector::Constant(2, 0.1))};
}

SynthesisProblem TwoTankRamp() {
  return {testing::TwoTankPlant(), testing::TwoTankStates(), testing::TwoTankInputs(),
          model::ReferenceClass::Ramp(Vector::Constant(2, 0.1))};
}

SynthesisOptions FewRestarts(int restarts) {
  SynthesisOptions o;
  o.restarts = restarts;
  o.threads = 1;
  return o;
}

bool Passes(const SynthesisProblem& p, const certify::Certificate& cert, double tol) {
  return certify::CheckCertificate(cert, p.plant, p.xc, p.uc, p.ref, tol).passed;
}

std::string Text(const certify::Certificate& cert) {
  std::ostringstream os;
  certify::WriteCertificate(os, cert);
  return os.str();
}

TEST_CASE("Nelder-Mead finds the minimum of a shifted quadratic") {
  const auto f = [](const Vector& x) {
    return std::pow(x[0] - 1.0, 2) + 10.0 * std::pow(x[1] + 2.0, 2);
  };
  NelderMeadOptions o;
  o.max_evals = 2000;
  o.f_tol = 1e-14;
  const NelderMeadResult r = NelderMeadMinimize(f, Vector::Zero(2), o);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(r.evals <= 2000);
}

TEST_CASE("Nelder-Mead steps around rejected points") {
  const auto f = [](const Vector& x) {
    if (x[0] < 0.5) return std::numeric_limits<double>::infinity();
    return (x[0] - 2.0) * (x[0] - 2.0);
  };
  NelderMeadOptions o;
  o.max_evals = 500;
  const Vector x0 = Vector::Constant(1, 1.0);
  CHECK(NelderMeadMinimize(f, x0, o).x[0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("objective and merit formulas") {
  certify::Certificate cert = testing::ScalarCertificate();
  cert.rho << 0.25, 0.5;
  cert.xi = {0.1, 0.2, 0.3, 0.4};
  cert.gamma = 2.0;
  CHECK(ObjectiveValue(cert, Objective::kPhi1) == 0.75);
  CHECK(ObjectiveValue(cert, Objective::kPhi2) == doctest::Approx(1.0));
  CHECK(Merit(cert, Objective::kPhi1, 1e-3) == doctest::Approx(0.752));
}

TEST_CASE("options are validated") {
  SynthesisOptions o;
  CHECK_NOTHROW(o.Validate(3));
  o.l_rows = 3;
  CHECK_THROWS_AS(o.Validate(3), InvalidOptions);
  o = SynthesisOptions{};
  o.restarts = 0;
  CHECK_THROWS_AS(o.Validate(3), InvalidOptions);
  o = SynthesisOptions{};
  o.conv_tol = 0.0;
  CHECK_THROWS_AS(o.Validate(3), InvalidOptions);
  o = SynthesisOptions{};
  o.rho_min << 0.5, 0.5;
  o.rho_max << 0.4, 1.0;
  CHECK_THROWS_AS(o.Validate(3), InvalidOptions);
}

TEST_CASE("scalar plant, ramp class, Phi1 yields a certified reference set") {
  const SynthesisProblem p = ScalarProblem();
  const SynthesisResult r = Synthesize(p, FewRestarts(2));
  CHECK(r.objective_value > 0.0);
  CHECK(r.objective_value == r.cert.rho[0] + r.cert.rho[1]);
  CHECK(Passes(p, r.cert, 1e-6));
  CHECK(r.cert.l() == 9);
}

TEST_CASE("a simplex-shaped set with n_cl + 1 rows still runs") {
  const SynthesisProblem p = ScalarProblem();
  SynthesisOptions o = FewRestarts(1);
  o.l_rows = 4;
  const SynthesisResult r = Synthesize(p, o);
  CHECK(r.cert.l() == 4);
  CHECK(r.objective_value > 0.0);
  CHECK(Passes(p, r.cert, 1e-6));
}

TEST_CASE("initialization on the two-tank ramp class gives Hurwitz gains") {
  const SynthesisProblem p = TwoTankRamp();
  const Iterate it = Initialize(p, FewRestarts(1), 0);
  const model::ClosedLoop cl = model::BuildClosedLoop(p.plant, it.cert.gains, p.ref);
  CHECK(numlin::IsHurwitz(cl.a_cl, 0.0));
  CHECK(Passes(p, it.cert, 1e-6));
  CHECK(it.merit == Merit(it.cert, Objective::kPhi1, 1e-3));
}

TEST_CASE("initialization is deterministic per seed and restart") {
  const SynthesisProblem p = TwoTankRamp();
  const SynthesisOptions o = FewRestarts(1);
  CHECK(Text(Initialize(p, o, 3).cert) == Text(Initialize(p, o, 3).cert));
  CHECK(Text(Initialize(p, o, 3).cert) != Text(Initialize(p, o, 4).cert));
}

TEST_CASE("no stabilizing gains inside a tiny box") {
  SynthesisProblem p = ScalarProblem();
  p.plant = model::PlantModel(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                              Matrix::Constant(1, 1, 1.0));
  SynthesisOptions o = FewRestarts(1);
  o.var_box.gains = {0.0, 0.001};
  o.max_gain_attempts = 500;
  CHECK_THROWS_AS(Initialize(p, o, 0), NoStabilizingGains);
  CHECK_THROWS_AS(Synthesize(p, o), NoFeasiblePoint);
}

TEST_CASE("one sweep keeps feasibility and does not lower the merit") {
  const SynthesisProblem p = TwoTankRamp();
  const SynthesisOptions o = FewRestarts(1);
  const Iterate start = Initialize(p, o, 0);
  const Iterate mid = AlternateStep(p, o, start, Phase::kMultipliers);
  CHECK(Acceptable(p, o, mid.cert));
  CHECK(mid.merit >= start.merit - 1e-9);
  const Iterate end = AlternateStep(p, o, mid, Phase::kGeometry);
  CHECK(Acceptable(p, o, end.cert));
  CHECK(end.merit >= mid.merit - 1e-9);
  CHECK((end.cert.v * end.cert.inv.l_cl - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("a geometry phase with rho pinned leaves Phi1 unchanged") {
  const SynthesisProblem p = TwoTankRamp();
  SynthesisOptions o = FewRestarts(1);
  const Iterate start = AlternateStep(p, o, Initialize(p, o, 0), Phase::kMultipliers);
  o.rho_min = start.cert.rho;
  o.rho_max = start.cert.rho;
  const Iterate end = AlternateStep(p, o, start, Phase::kGeometry);
  CHECK(ObjectiveValue(end.cert, Objective::kPhi1) ==
        ObjectiveValue(start.cert, Objective::kPhi1));
  CHECK(end.cert.gains.Stacked() == start.cert.gains.Stacked());
}

TEST_CASE("merit history is monotone and the result is consistent") {
  const SynthesisProblem p = TwoTankRamp();
  const SynthesisResult r = Synthesize(p, FewRestarts(2));
  REQUIRE(r.merit_history.size() == r.history.size());
  for (size_t k = 1; k < r.merit_history.size(); ++k) {
    CHECK(r.merit_history[k] >= r.merit_history[k - 1]);
  }
  CHECK(r.objective_value == r.cert.rho[0] + r.cert.rho[1]);
  CHECK(r.merit == doctest::Approx(r.merit_history.back()));
  CHECK(Passes(p, r.cert, 1e-6));
  for (const auto& g : {r.cert.gains.k, r.cert.gains.k_i1, r.cert.gains.k_i2, r.cert.gains.k_r}) {
    CHECK(g.cwiseAbs().maxCoeff() <= 100.0);
  }
}

TEST_CASE("Phi2 reports the integral-bound sum and keeps rho_min") {
  SynthesisProblem p = TwoTankRamp();
  p.ref = model::ReferenceClass::Sinusoid(1.0, Vector::Constant(2, 0.1));
  SynthesisOptions o = FewRestarts(2);
  o.objective = Objective::kPhi2;
  o.rho_min = Vector::Constant(2, 0.1);
  const SynthesisResult r = Synthesize(p, o);
  CHECK(r.objective_value == r.cert.xi.Sum());
  CHECK((r.cert.rho.array() >= 0.1).all());
  CHECK(Passes(p, r.cert, 1e-6));
}

TEST_CASE("synthesis is deterministic and independent of the thread count") {
  const SynthesisProblem p = TwoTankRamp();
  SynthesisOptions o = FewRestarts(3);
  std::vector<std::string> log_a, log_b;
  const SynthesisResult a = Synthesize(p, o, [&](const std::string& s) { log_a.push_back(s); });
  o.threads = 3;
  const SynthesisResult b = Synthesize(p, o, [&](const std::string& s) { log_b.push_back(s); });
  CHECK(Text(a.cert) == Text(b.cert));
  CHECK(a.history == b.history);
  CHECK(a.restart_index == b.restart_index);
  CHECK(log_a == log_b);
  REQUIRE(!log_a.empty());
  CHECK(log_a.front().rfind("restart=0 iter=0 phase=init status=", 0) == 0);
  CHECK(log_a.back().rfind("best restart=", 0) == 0);
}

TEST_CASE("a transmission zero at the reference mode is rejected") {
  SynthesisProblem p = ScalarProblem();
  Matrix a(2, 2), b(2, 1), c(1, 2);
  a << -1.0, 0.0, 0.0, -2.0;
  b << 1.0, 1.0;
  c << 2.0, -4.0;  // 2/(s+1) - 4/(s+2) = -2 s / ((s+1)(s+2))
  p.plant = model::PlantModel(a, b, c);
  p.xc = model::StateConstraint::FromBox(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  CHECK_THROWS_AS(Synthesize(p, FewRestarts(1)), InvalidModel);
}

}  // namespace
}  // namespace rpitrack::synth
