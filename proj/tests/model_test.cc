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
#include <complex>
#include <random>

#include "doctest.h"
#include "rpitrack/errors.h"
#include "rpitrack/model/closed_loop.h"
#include "rpitrack/numlin/stability.h"
#include "rpitrack/polyhedra/polyhedron.h"
#include "rpitrack/sim/simulate.h"
#include "two_tank.h"

namespace rpitrack::model {
namespace {

using testing::Rho;

std::complex<double> Det3(const Eigen::Matrix3cd& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

TEST_CASE("closed loop with zero gains") {
  const PlantModel plant = testing::TwoTankPlant();
  const ClosedLoop cl =
      BuildClosedLoop(plant, ControllerGains::Zero(1), ReferenceClass::Ramp(Rho(1, 1)));
  Matrix expect = Matrix::Zero(4, 4);
  expect.topLeftCorner(2, 2) = plant.a();
  expect.block(2, 0, 1, 2) = -plant.c();
  expect(3, 2) = 1.0;
  CHECK(cl.a_cl == expect);
  Matrix b(4, 1);
  b << 0, 0, 1, 0;
  CHECK(cl.b_cl == b);
}

TEST_CASE("closed loop entries for the tabulated gains") {
  const PlantModel plant = testing::TwoTankPlant();
  const ClosedLoop cl = BuildClosedLoop(plant, testing::RampPhi2Gains(),
                                        ReferenceClass::Ramp(Rho(0.3, 0.2)));
  CHECK(cl.a_cl(0, 0) == doctest::Approx(-0.0304 + 6.6667 * -3.8881));
  CHECK(cl.a_cl(0, 0) == doctest::Approx(-25.9511).epsilon(1e-5));
  CHECK(cl.a_cl(1, 3) == doctest::Approx(10.0 * 0.0085));
  CHECK(cl.b_cl(0, 0) == doctest::Approx(6.6667 * 3.3142));

  const ClosedLoop sin_cl = BuildClosedLoop(plant, testing::SinusoidGains(),
                                            ReferenceClass::Sinusoid(1.0, Rho(0.13, 0.13)));
  CHECK(sin_cl.a_cl(2, 3) == -1.0);
  for (const ControllerGains& g :
       {testing::RampPhi1Gains(), testing::RampPhi2Gains()}) {
    CHECK(numlin::IsHurwitz(BuildClosedLoop(plant, g, ReferenceClass::Ramp(Rho(1, 1))).a_cl, 1e-4));
  }
  CHECK(numlin::IsHurwitz(sin_cl.a_cl, 1e-4));
}

TEST_CASE("closed loop round trip") {
  const PlantModel plant = testing::TwoTankPlant();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ControllerGains g = ControllerGains::Scalar(u(rng), u(rng), u(rng), u(rng));
    const double w = trial % 2 == 0 ? 0.0 : 0.5 + 0.1 * trial;
    const ReferenceClass ref =
        w == 0.0 ? ReferenceClass::Ramp(Rho(1, 1)) : ReferenceClass::Sinusoid(w, Rho(1, 1));
    const DecomposedLoop d = DecomposeClosedLoop(BuildClosedLoop(plant, g, ref), plant);
    CHECK((d.gains.Stacked() - g.Stacked()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.alpha == doctest::Approx(ref.alpha));
  }
}

TEST_CASE("plant validation") {
  Matrix a = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(PlantModel(a, Matrix::Ones(2, 1), Matrix::Ones(2, 2)), InvalidModel);
  CHECK_THROWS_AS(PlantModel(a, Matrix::Ones(3, 1), Matrix::Ones(1, 2)), DimensionMismatch);
  Matrix b(2, 1), c(1, 2);
  b << 1, 0;
  c << 1, 1;
  CHECK_THROWS_AS(PlantModel(a, b, c), InvalidModel);  // uncontrollable
  Matrix a2(2, 2);
  a2 << -1, 0, 0, -2;
  c << 1, 0;
  CHECK_THROWS_AS(PlantModel(a2, Matrix::Ones(2, 1), c), InvalidModel);  // unobservable
  CHECK_THROWS_AS(ReferenceClass::Ramp(Rho(0.1, 0.0)), DimensionMismatch);
  CHECK_THROWS_AS(ReferenceClass::Sinusoid(-1.0, Rho(0.1, 0.1)), DimensionMismatch);
}

TEST_CASE("transmission zeros") {
  const PlantModel plant = testing::TwoTankPlant();
  Eigen::Matrix3cd m;
  m << -0.0304, 0.0187, 6.6667, 0, -0.0187, 10, 1, 0, 0;
  CHECK(std::abs(Det3(m)) > 0.1);
  CHECK(TransmissionZeroCheck(plant, ReferenceClass::Ramp(Rho(1, 1)), 1e-9));
  m(0, 0) -= std::complex<double>(0.0, 1.0);
  m(1, 1) -= std::complex<double>(0.0, 1.0);
  CHECK(std::abs(Det3(m)) > 0.1);
  CHECK(TransmissionZeroCheck(plant, ReferenceClass::Sinusoid(1.0, Rho(1, 1)), 1e-9));

  // Numerator -s: a zero at the origin blocks ramp tracking.
  Matrix a(2, 2), c(1, 2);
  a << -1, 0, 0, -2;
  c << 1, -2;
  const PlantModel ramp_blocked(a, Matrix::Ones(2, 1), c);
  CHECK_FALSE(TransmissionZeroCheck(ramp_blocked, ReferenceClass::Ramp(Rho(1, 1)), 1e-9));
  CHECK(TransmissionZeroCheck(ramp_blocked, ReferenceClass::Sinusoid(1.0, Rho(1, 1)), 1e-9));

  // Numerator s^2 + 1: zeros at +-j.
  Matrix a3 = Matrix::Zero(3, 3);
  a3.diagonal() << -1, -2, -3;
  Matrix c3(1, 3);
  c3 << 1, -5, 5;
  const PlantModel sin_blocked(a3, Matrix::Ones(3, 1), c3);
  CHECK_FALSE(TransmissionZeroCheck(sin_blocked, ReferenceClass::Sinusoid(1.0, Rho(1, 1)), 1e-9));
  CHECK(TransmissionZeroCheck(sin_blocked, ReferenceClass::Ramp(Rho(1, 1)), 1e-9));
}

TEST_CASE("stacked state constraints") {
  IntegralBounds xi{0.1, 0.1, 0.0487, 0.0739};
  const polyhedra::Polyhedron p = StackStateConstraints(testing::TwoTankStates(), xi);
  CHECK(p.num_rows() == 8);
  CHECK(p.dim() == 4);
  CHECK(p.shape.topRightCorner(4, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.shape.bottomLeftCorner(4, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.shape(5, 3) == 0.0);
  CHECK(p.shape(6, 2) == 0.0);
  CHECK(p.shape(5, 2) == -0.1);
  CHECK(p.shape(7, 3) == -0.0739);
  CHECK(p.shape(0, 0) == doctest::Approx(1.0 / 0.68));
  CHECK(p.shape(1, 0) == doctest::Approx(-1.0 / 0.38));
  CHECK(polyhedra::Contains(p, Vector::Zero(4), 0.0));
  CHECK(p.OriginInterior());

  const polyhedra::Polyhedron unit =
      StackStateConstraints(StateConstraint::FromBox(-Vector::Ones(3), Vector::Ones(3)),
                            IntegralBounds{1.0, 1.0, 1.0, 1.0});
  CHECK(polyhedra::Contains(unit, Vector::Ones(5), 1e-12));
  CHECK_FALSE(polyhedra::Contains(unit, Vector::Ones(5) * 1.01, 1e-12));
}

TEST_CASE("input constraint map") {
  const PlantModel plant = testing::TwoTankPlant();
  CHECK(InputConstraintMap(ControllerGains::Zero(1), plant).cwiseAbs().maxCoeff() == 0.0);
  RowVector e2(5), e1(5);
  e2 << -3.8881, 0, 0.3733, 0.0085, 3.3142;
  e1 << -3.3170, 0, 0.3141, 0.0071, 2.8208;
  CHECK((InputConstraintMap(testing::RampPhi2Gains(), plant) - e2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((InputConstraintMap(testing::RampPhi1Gains(), plant) - e1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("problem size counts") {
  ProblemDims d{2, 1, 9, 2, 4, 2, 2, 2};
  const ProblemCounts c = ProblemSize(d);
  CHECK(c.num_variables == 251);
  CHECK(c.num_equalities == 4 * (9 + 4 + 2 + 2 + 2 + 4) + 2 * (9 + 2));
  CHECK(c.num_inequalities == 9 + 4 + 2 + 2 + 2);

  const ProblemCounts ones = ProblemSize(ProblemDims{1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(ones.num_variables == 1 + (3 + 6) + 6 + 9 + 1);
  CHECK(ones.num_equalities == 3 * (5 + 3) + 4);
  CHECK(ones.num_inequalities == 5);

  // The variable count is quadratic in l: second difference is exactly 2.
  ProblemDims step = d;
  step.l = 10;
  ProblemDims step2 = d;
  step2.l = 11;
  const auto v0 = ProblemSize(d).num_variables;
  const auto v1 = ProblemSize(step).num_variables;
  const auto v2 = ProblemSize(step2).num_variables;
  CHECK(v2 - 2 * v1 + v0 == 2);
  CHECK(v1 - v0 == 2 * 9 + 1 + (4 + 2 + 4 + 2 + 2 + 2));
  CHECK_THROWS_AS(ProblemSize(ProblemDims{0, 1, 1, 1, 1, 1, 1, 1}), DimensionMismatch);
}

TEST_CASE("stabilizing gains give asymptotic tracking") {
  const PlantModel plant = testing::TwoTankPlant();
  const ControllerGains g = testing::SinusoidGains();
  const ReferenceClass ref = ReferenceClass::Sinusoid(1.0, Rho(0.13, 0.13));
  const ClosedLoop cl = BuildClosedLoop(plant, g, ref);
  const sim::Trajectory tr =
      sim::Simulate(cl, g, plant, sim::Sinusoid{0.13, 1.0, 0.0}, Vector::Zero(4), 500.0, 1e-3);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < tr.size(); ++k) {
    if (tr.times[k] >= 400.0) worst = std::max(worst, std::abs(tr.errors[k]));
  }
  CHECK(worst <= 1e-3);
}

}  // namespace
}  // namespace rpitrack::model
