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

#include <sstream>

#include "doctest.h"
#include "hand_certificate.h"
#include "rpitrack/certify/complete.h"
#include "rpitrack/certify/falsify.h"
#include "rpitrack/certify/serialize.h"
#include "rpitrack/errors.h"
#include "rpitrack/numlin/stability.h"
#include "rpitrack/sim/reference.h"

namespace rpitrack::certify {
namespace {

using testing::ScalarCertificate;
using testing::ScalarGains;
using testing::ScalarInputs;
using testing::ScalarPlant;
using testing::ScalarStates;

model::ReferenceClass ScalarRamp() {
  return model::ReferenceClass::Ramp(Vector::Constant(2, 1.0 / 16.0));
}

CertReport CheckScalar(const Certificate& cert, double tol = kEqualityTol) {
  return CheckCertificate(cert, ScalarPlant(), ScalarStates(), ScalarInputs(),
                          ScalarRamp(), tol);
}

double MaxOf(const CertReport& r, std::initializer_list<const char*> names) {
  double worst = 0.0;
  for (const char* name : names) worst = std::max(worst, r.Value(name));
  return worst;
}

TEST_CASE("scalar fixture data is self-consistent") {
  const Matrix w = testing::ScalarModes();
  CHECK((w * testing::ScalarModesInverse() - Matrix::Identity(3, 3)).norm() == 0.0);
  const model::ClosedLoop cl =
      model::BuildClosedLoop(ScalarPlant(), ScalarGains(), ScalarRamp());
  Matrix a(3, 3);
  a << -6, 11, 6, -1, 0, 0, 0, 1, 0;
  CHECK(cl.a_cl == a);
  const Vector lambda = (Vector(3) << -1.0, -2.0, -3.0).finished();
  CHECK((w * cl.a_cl - lambda.asDiagonal() * w).norm() == 0.0);
  const Vector wb = w * cl.b_cl;
  CHECK(wb == (Vector(3) << -1.0, 0.0, 1.0).finished());
  CHECK(numlin::CharacteristicPolynomial(cl.a_cl).isApprox(
      (Vector(4) << 1.0, 6.0, 11.0, 6.0).finished()));
}

TEST_CASE("hand-built certificate passes with zero residuals") {
  const CertReport report = CheckScalar(ScalarCertificate(), 1e-9);
  CHECK(report.passed);
  REQUIRE(report.residuals.size() == ResidualNames().size());
  for (size_t i = 0; i < report.residuals.size(); ++i) {
    CAPTURE(report.residuals[i].name);
    CHECK(report.residuals[i].name == ResidualNames()[i]);
    CHECK(report.residuals[i].value <= 1e-9);
  }
}

TEST_CASE("single-entry perturbations are detected") {
  const Certificate base = ScalarCertificate();
  struct Case {
    Matrix Certificate::*field;  // null for l_cl
    Eigen::Index i, j;
    std::initializer_list<const char*> residuals;
  };
  const std::initializer_list<const char*> rpi = {"rpi_x", "rpi_xi1", "rpi_xi2"};
  const std::initializer_list<const char*> every_l = {
      "rpi_x",       "rpi_xi1",       "rpi_xi2",       "rpi_ref",
      "rank_identity", "state_map",   "input_map_x",   "input_map_xi1",
      "input_map_xi2"};
  const std::initializer_list<const char*> state = {"state_map"};
  const std::initializer_list<const char*> input = {"input_map_x", "input_map_xi1",
                                                    "input_map_xi2"};
  const std::vector<Case> cases = {
      {&Certificate::h, 0, 0, rpi},       {&Certificate::h, 0, 1, rpi},
      {&Certificate::h, 2, 5, rpi},       {&Certificate::h, 4, 3, rpi},
      {nullptr, 0, 0, every_l},           {nullptr, 1, 2, every_l},
      {nullptr, 3, 1, every_l},           {nullptr, 5, 0, every_l},
      {&Certificate::t, 0, 0, state},     {&Certificate::t, 1, 4, state},
      {&Certificate::t, 3, 2, state},     {&Certificate::t, 5, 5, state},
      {&Certificate::q, 0, 0, input},     {&Certificate::q, 0, 3, input},
      {&Certificate::q, 1, 2, input},
  };
  REQUIRE(cases.size() == 15);
  for (const Case& c : cases) {
    Certificate cert = base;
    Matrix& target = c.field ? cert.*c.field : cert.inv.l_cl;
    target(c.i, c.j) += 1e-3;
    const CertReport report = CheckScalar(cert);
    CAPTURE(c.i);
    CAPTURE(c.j);
    CHECK_FALSE(report.passed);
    CHECK(MaxOf(report, c.residuals) >= 5e-4);
  }
}

TEST_CASE("an H perturbation shows up linearly in the invariance residual") {
  Certificate cert = ScalarCertificate();
  cert.h(1, 4) += 1e-3;
  const CertReport report = CheckScalar(cert);
  const double expect = 1e-3 * cert.inv.l_cl.row(4).cwiseAbs().maxCoeff();
  CHECK(MaxOf(report, {"rpi_x", "rpi_xi1", "rpi_xi2"}) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("gamma must be strictly positive") {
  Certificate cert = ScalarCertificate();
  cert.gamma = 0.0;
  const CertReport report = CheckScalar(cert);
  CHECK_FALSE(report.passed);
  CHECK_FALSE(report.Find("gamma_positive").passed());
  CHECK(report.Find("rpi_decay").passed());
}

TEST_CASE("sign conditions are reported") {
  Certificate cert = ScalarCertificate();
  cert.h(0, 1) = -0.25;
  cert.h(0, 0) += 0.25;
  CHECK(CheckScalar(cert).Value("h_metzler") == doctest::Approx(0.25));

  Certificate neg = ScalarCertificate();
  neg.t(0, 1) = -0.5;
  CHECK(CheckScalar(neg).Value("t_nonneg") == doctest::Approx(0.5));
}

TEST_CASE("the decay condition depends on rho") {
  Certificate cert = ScalarCertificate();
  // Row 2 (third mode) reads -3 + 32 rho_1 + gamma <= 0.
  cert.rho[0] = 0.1;
  const CertReport report = CheckScalar(cert);
  CHECK(report.Value("rpi_decay") == doctest::Approx(-3.0 + 3.2 + 0.5));
  CHECK_FALSE(report.passed);
}

TEST_CASE("unstable gains fail the Hurwitz entry") {
  Certificate cert = ScalarCertificate();
  cert.gains = model::ControllerGains::Scalar(3.0, 0.0, 0.0, 0.0);
  const CertReport report = CheckScalar(cert);
  CHECK(report.Value("hurwitz") > 0.0);
  CHECK(StabilityMargin(Matrix::Identity(2, 2) * -2.0) == doctest::Approx(2.0));
}

TEST_CASE("dimension errors throw, semantic ones do not") {
  Certificate cert = ScalarCertificate();
  cert.h.conservativeResize(5, 6);
  CHECK_THROWS_AS(CheckScalar(cert), DimensionMismatch);
  Certificate bad_v = ScalarCertificate();
  bad_v.v.resize(2, 6);
  CHECK_THROWS_AS(CheckScalar(bad_v), DimensionMismatch);
  Certificate nan = ScalarCertificate();
  nan.q(0, 0) = std::nan("");
  CHECK_THROWS_AS(CheckScalar(nan), DimensionMismatch);
}

TEST_CASE("completion recovers the withheld multipliers") {
  const Certificate hand = ScalarCertificate();
  const Completion done =
      CompleteCertificate(hand.gains, hand.inv, hand.rho, hand.xi, ScalarPlant(),
                          ScalarStates(), ScalarInputs(), ScalarRamp());
  REQUIRE(done.feasible());
  const CertReport report = CheckScalar(*done.cert);
  CHECK(report.passed);
  CHECK(done.cert->gamma >= hand.gamma - 1e-9);

  // Feasible at rho implies feasible at rho / 2.
  const Completion half =
      CompleteCertificate(hand.gains, hand.inv, 0.5 * hand.rho, hand.xi, ScalarPlant(),
                          ScalarStates(), ScalarInputs(), ScalarRamp());
  REQUIRE(half.feasible());
  CHECK(CheckScalar(*half.cert).passed);
  CHECK(half.cert->gamma >= done.cert->gamma - 1e-9);
}

TEST_CASE("completion is infeasible for an unstable loop") {
  const Certificate hand = ScalarCertificate();
  InvariantSet box;
  box.l_cl.resize(6, 3);
  box.l_cl << 2.0 * Matrix::Identity(3, 3), -2.0 * Matrix::Identity(3, 3);
  const Completion done = CompleteCertificate(
      model::ControllerGains::Scalar(3.0, 0.0, 0.0, 0.0), box, hand.rho, hand.xi,
      ScalarPlant(), ScalarStates(), ScalarInputs(), ScalarRamp());
  CHECK_FALSE(done.feasible());
  CHECK(done.status == numlin::LpStatus::kInfeasible);
}

TEST_CASE("completion rejects a rank-deficient or unbounded set") {
  const Certificate hand = ScalarCertificate();
  InvariantSet flat;
  flat.l_cl = Matrix::Zero(4, 3);
  flat.l_cl.col(0) << 1, -1, 2, -2;
  CHECK_THROWS_AS(CompleteCertificate(hand.gains, flat, hand.rho, hand.xi, ScalarPlant(),
                                      ScalarStates(), ScalarInputs(), ScalarRamp()),
                  RankDeficient);
  InvariantSet open;
  open.l_cl = Matrix::Identity(4, 3);
  open.l_cl.row(3) << 1, 1, 1;
  CHECK_THROWS_AS(CompleteCertificate(hand.gains, open, hand.rho, hand.xi, ScalarPlant(),
                                      ScalarStates(), ScalarInputs(), ScalarRamp()),
                  Unbounded);
}

TEST_CASE("falsification scenarios start on the boundary with admissible references") {
  const Certificate cert = ScalarCertificate();
  FalsifyOptions opts;
  opts.n_samples = 24;
  opts.horizon = 50.0;
  const auto scenarios = FalsifyScenarios(cert, ScalarRamp(), opts);
  REQUIRE(scenarios.size() == 24);
  for (const FalsifyScenario& sc : scenarios) {
    CHECK((cert.inv.l_cl * sc.x0).maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sim::ReferenceAdmissible(sc.reference, cert.rho, opts.horizon, 1e-12));
  }
  const auto again = FalsifyScenarios(cert, ScalarRamp(), opts);
  for (size_t i = 0; i < scenarios.size(); ++i) CHECK(again[i].x0 == scenarios[i].x0);
}

TEST_CASE("a valid certificate survives falsification") {
  FalsifyOptions opts;
  opts.n_samples = 60;
  opts.horizon = 20.0;
  const auto found = FalsifyBySimulation(ScalarCertificate(), ScalarPlant(),
                                         ScalarStates(), ScalarInputs(), ScalarRamp(),
                                         opts);
  CHECK(found.empty());
}

TEST_CASE("an inflated set is caught by falsification") {
  Certificate cert = ScalarCertificate();
  cert.inv.l_cl /= 1.5;
  FalsifyOptions opts;
  opts.n_samples = 20;
  opts.horizon = 5.0;
  const auto found = FalsifyBySimulation(cert, ScalarPlant(), ScalarStates(),
                                         ScalarInputs(), ScalarRamp(), opts);
  CHECK_FALSE(found.empty());
}

TEST_CASE("certificate text round trip is exact") {
  Certificate cert = ScalarCertificate();
  cert.gamma = 0.1;
  cert.h(0, 1) = 1.0 / 3.0;
  std::ostringstream first;
  WriteCertificate(first, cert);
  std::istringstream in(first.str());
  const Certificate back = ReadCertificate(in);
  CHECK(back.inv.l_cl == cert.inv.l_cl);
  CHECK(back.h == cert.h);
  CHECK(back.gamma == cert.gamma);
  CHECK(back.xi.x_i12 == cert.xi.x_i12);
  CHECK(back.gains.Stacked() == cert.gains.Stacked());
  std::ostringstream second;
  WriteCertificate(second, back);
  CHECK(second.str() == first.str());
}

TEST_CASE("certificate parse errors carry line numbers") {
  std::ostringstream os;
  WriteCertificate(os, ScalarCertificate());
  std::string text = os.str();
  const auto pos = text.find("h = [\n");
  REQUIRE(pos != std::string::npos);
  // Corrupt the first number of the first row of h.
  const auto row_start = pos + 6;
  text[row_start + 2] = 'x';
  std::istringstream in(text);
  int line = 0;
  try {
    ReadCertificate(in);
  } catch (const ParseError& e) {
    line = e.line();
  }
  const int expect =
      1 + static_cast<int>(std::count(text.begin(), text.begin() + row_start, '\n'));
  CHECK(line == expect);
}

TEST_CASE("text format basics") {
  std::istringstream ok(
      "# header\n[a]\nx = 1.5\nname = ramp\nrow = [1, 2; 3 4]\nmat = [\n 1 2\n 3 4\n]\n");
  const TextDocument doc = TextDocument::Parse(ok);
  const TextSection& a = doc.Section("a");
  CHECK(a.Number("x") == 1.5);
  CHECK(a.String("name") == "ramp");
  CHECK(a.Mat("row") == a.Mat("mat"));
  CHECK(a.Number("missing", 7.0) == 7.0);

  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      TextDocument::Parse(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("[a]\nm = [\n1 2\n3\n]\n") == 4);
  CHECK(line_of("[a]\nm = [\n1 2\n") == 2);
  CHECK(line_of("x = 1\n") == 1);
  CHECK(line_of("[a]\nx = 1\nx = 2\n") == 3);
  CHECK(line_of("[a]\nm = [1 2 nan]\n") == 2);
  CHECK(line_of("[a]\n[a]\n") == 2);
  CHECK(line_of("[a]\nnonsense\n") == 2);

  std::istringstream unknown("[a]\nx = 1\ny = 2\n");
  const TextDocument d2 = TextDocument::Parse(unknown);
  CHECK_THROWS_AS(d2.Section("a").RejectUnknown({"x"}), ParseError);
  CHECK_THROWS_AS(d2.Section("b"), ParseError);
  CHECK_THROWS_AS(d2.Section("a").Mat("x"), ParseError);
}

TEST_CASE("report rendering") {
  const CertReport report = CheckScalar(ScalarCertificate());
  std::ostringstream table, kv;
  report.WriteTable(table);
  report.WriteKeyValue(kv);
  CHECK(table.str().find("rpi_x") != std::string::npos);
  CHECK(table.str().find("PASS") != std::string::npos);
  CHECK(kv.str().find("passed = true") != std::string::npos);
}

}  // namespace
}  // namespace rpitrack::certify
