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
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rpitrack/errors.h"
#include "rpitrack/sim/reference.h"
#include "rpitrack/sim/simulate.h"
#include "two_tank.h"

namespace rpitrack::sim {
namespace {

using model::ControllerGains;
using model::PlantModel;
using model::ReferenceClass;

PlantModel ScalarPlant() {
  return PlantModel(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                    Matrix::Constant(1, 1, 1.0));
}

// x' = -x + r: the plant with only the feedforward gain active.
double ScalarEndpointError(double dt, double horizon) {
  const PlantModel plant = ScalarPlant();
  const ControllerGains g = ControllerGains::Scalar(0.0, 0.0, 0.0, 1.0);
  const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
  SimOptions opt;
  opt.decimation = 1;
  const Trajectory tr =
      Simulate(cl, g, plant, Ramp{0.0, 1.0}, Vector::Zero(3), horizon, dt, opt);
  return std::abs(tr.states(tr.size() - 1, 0) - (1.0 - std::exp(-horizon)));
}

TEST_CASE("reference evaluation") {
  const ReferenceSignal prof = TwoTankProfile();
  CHECK(EvalReference(prof, 30.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(EvalReference(prof, 200.0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(EvalReference(prof, 100.0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(EvalReference(prof, 10.0) == doctest::Approx(0.1).epsilon(1e-12));
  const ReferenceSignal s = Sinusoid{0.13, 1.0, 0.0};
  CHECK(EvalReference(s, std::numbers::pi / 2) == doctest::Approx(0.13));
  CHECK(ContinuityGap(prof) < 1e-12);
  CHECK_NOTHROW(ValidateReference(prof));
}

TEST_CASE("rounded piecewise coefficients leave gaps") {
  const ReferenceSignal rounded =
      PiecewiseRamp{{{0.0, 0.01, 0.0}, {30.0, -0.0071, 0.5143}, {100.0, 0.0, -0.2}}};
  CHECK(ContinuityGap(rounded) > 1e-3);
  CHECK_THROWS_AS(ValidateReference(rounded), InvalidModel);
  CHECK_THROWS_AS(ValidateReference(PiecewiseRamp{{{1.0, 0.0, 0.0}}}), InvalidModel);
}

TEST_CASE("reference range is exact") {
  const ReferenceSignal prof = TwoTankProfile();
  auto [lo, hi] = ReferenceRange(prof, 400.0);
  CHECK(lo == doctest::Approx(-0.2));
  CHECK(hi == doctest::Approx(0.3));
  CHECK(ReferenceAdmissible(prof, testing::Rho(0.3, 0.2), 400.0, 1e-12));
  CHECK_FALSE(ReferenceAdmissible(prof, testing::Rho(0.29, 0.2), 400.0, 1e-12));
  const ReferenceSignal s = Sinusoid{0.5, 2.0, 0.3};
  for (double h : {0.2, 1.0, 3.0}) {
    auto [slo, shi] = ReferenceRange(s, h);
    double dlo = 1e9, dhi = -1e9;
    for (int k = 0; k <= 100000; ++k) {
      const double v = EvalReference(s, h * k / 100000.0);
      dlo = std::min(dlo, v);
      dhi = std::max(dhi, v);
    }
    CHECK(std::abs(slo - dlo) < 1e-8);
    CHECK(std::abs(shi - dhi) < 1e-8);
  }
}

TEST_CASE("exosystem consistency of sinusoids") {
  const double w = 1.0, dt = 1e-3;
  const ReferenceSignal s = Sinusoid{0.13, w, 0.4};
  for (double t = dt; t < 20.0; t += 0.37) {
    const double rdd = (EvalReference(s, t + dt) - 2.0 * EvalReference(s, t) +
                        EvalReference(s, t - dt)) / (dt * dt);
    CHECK(std::abs(rdd + w * w * EvalReference(s, t)) <= 1e-6);
  }
}

TEST_CASE("equilibrium stays at zero") {
  const PlantModel plant = testing::TwoTankPlant();
  const ControllerGains g = testing::RampPhi2Gains();
  const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
  const Trajectory tr = Simulate(cl, g, plant, Ramp{}, Vector::Zero(4), 5.0, 1e-3);
  CHECK(tr.states.cwiseAbs().maxCoeff() == 0.0);
  CHECK(Monitor(tr, plant, testing::TwoTankStates(), testing::TwoTankInputs(),
                std::nullopt, 1e-9)
            .empty());
}

TEST_CASE("fourth-order accuracy on the scalar example") {
  CHECK(ScalarEndpointError(1e-3, 5.0) <= 1e-8);
  const double coarse = ScalarEndpointError(0.1, 5.0);
  const double fine = ScalarEndpointError(0.05, 5.0);
  const double ratio = coarse / fine;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("simulation is linear in initial state and reference") {
  const PlantModel plant = testing::TwoTankPlant();
  const ControllerGains g = testing::SinusoidGains();
  const auto cl = model::BuildClosedLoop(
      plant, g, ReferenceClass::Sinusoid(1.0, testing::Rho(0.1, 0.1)));
  Vector xa(4), xb(4);
  xa << 0.1, -0.05, 0.2, 0.0;
  xb << -0.02, 0.03, 0.0, 0.1;
  const Trajectory ta = Simulate(cl, g, plant, Sinusoid{0.1, 1.0, 0.0}, xa, 20.0, 1e-3);
  const Trajectory tb = Simulate(cl, g, plant, Ramp{0.0, 0.05}, xb, 20.0, 1e-3);
  // Sum of a sinusoid and a constant, written as a sinusoid-free signal
  // would not be expressible, so compare through the error channel instead.
  const Trajectory tab =
      Simulate(cl, g, plant, Sinusoid{0.1, 1.0, 0.0}, xa + xb, 20.0, 1e-3);
  const Trajectory t0b = Simulate(cl, g, plant, Ramp{}, xb, 20.0, 1e-3);
  CHECK((tab.states - ta.states - t0b.states).cwiseAbs().maxCoeff() <= 1e-9);
  const Trajectory tr0 = Simulate(cl, g, plant, Ramp{0.0, 0.05}, Vector::Zero(4), 20.0, 1e-3);
  CHECK((tb.states - t0b.states - tr0.states).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("tabulated gains track the two-tank profile") {
  const PlantModel plant = testing::TwoTankPlant();
  for (const ControllerGains& g : {testing::RampPhi1Gains(), testing::RampPhi2Gains()}) {
    const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
    const Trajectory tr = Simulate(cl, g, plant, TwoTankProfile(), Vector::Zero(4), 400.0, 1e-3);
    CHECK(tr.size() == 40001);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < tr.size(); ++k) {
      if (tr.times[k] >= 300.0) worst = std::max(worst, std::abs(tr.errors[k]));
    }
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("monitor flags a saturating run") {
  const PlantModel plant = testing::TwoTankPlant();
  ControllerGains g = testing::RampPhi2Gains();
  g.k_r *= 10.0;
  const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
  ConstraintMonitor mon(plant, testing::TwoTankStates(), testing::TwoTankInputs(),
                        std::nullopt, 1e-9);
  SimOptions opt;
  opt.observer = mon.AsObserver();
  // A fast reference passes straight through the inflated feedforward gain.
  const Trajectory tr =
      Simulate(cl, g, plant, Sinusoid{0.3, 50.0, 0.0}, Vector::Zero(4), 5.0, 1e-3, opt);
  CHECK(mon.count() > 0);
  bool input_hit = false;
  for (const Violation& v : mon.violations()) input_hit |= v.kind == Violation::Kind::kInput;
  CHECK(input_hit);
  CHECK_FALSE(Monitor(tr, plant, testing::TwoTankStates(), testing::TwoTankInputs(),
                      std::nullopt, 1e-9)
                  .empty());
}

TEST_CASE("unstable loop raises NonFiniteState") {
  const PlantModel plant = ScalarPlant();
  const ControllerGains g = ControllerGains::Scalar(400.0, 0.0, 0.0, 0.0);
  const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
  Vector x0 = Vector::Zero(3);
  x0[0] = 1.0;
  CHECK_THROWS_AS(Simulate(cl, g, plant, Ramp{}, x0, 10.0, 1e-3), NonFiniteState);
  CHECK_THROWS_AS(Simulate(cl, g, plant, Ramp{}, x0, 10.0, -1.0), DimensionMismatch);
}

TEST_CASE("csv export") {
  const PlantModel plant = testing::TwoTankPlant();
  const ControllerGains g = testing::RampPhi2Gains();
  const auto cl = model::BuildClosedLoop(plant, g, ReferenceClass::Ramp(testing::Rho(1, 1)));
  const Trajectory tr = Simulate(cl, g, plant, Ramp{0.001, 0.0}, Vector::Zero(4), 1.0, 1e-3);
  std::ostringstream os;
  WriteTrajectoryCsv(os, tr, 2);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x1,x2,x_I1,x_I2,u,y,r,e");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 101);
}

}  // namespace
}  // namespace rpitrack::sim
