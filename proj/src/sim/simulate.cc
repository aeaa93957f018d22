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
#include "rpitrack/sim/simulate.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "rpitrack/errors.h"

namespace rpitrack::sim {

Trajectory Simulate(const model::ClosedLoop& cl,
                    const model::ControllerGains& gains,
                    const model::PlantModel& plant, const ReferenceSignal& sig,
                    const Vector& x0, double horizon, double dt,
                    const SimOptions& options) {
  const Eigen::Index n = plant.n();
  const Eigen::Index n_cl = n + 2;
  const Eigen::Index m = plant.m();
  numlin::RequireShape(cl.a_cl, n_cl, n_cl, "Simulate a_cl");
  numlin::RequireShape(cl.b_cl, n_cl, 1, "Simulate b_cl");
  gains.Validate(m);
  if (x0.size() != n_cl || !x0.allFinite()) {
    throw DimensionMismatch("Simulate: x0 must be finite with n + 2 entries");
  }
  if (!(dt > 0.0) || !(horizon >= dt) || !std::isfinite(horizon)) {
    throw DimensionMismatch("Simulate: need dt > 0 and horizon >= dt");
  }
  if (options.decimation < 1) {
    throw DimensionMismatch("Simulate: decimation must be >= 1");
  }
  ValidateReference(sig);

  const long steps = std::lround(horizon / dt);
  // One RK4 step of a linear system is linear in (x, r(t), r(t+dt/2),
  // r(t+dt)); the four maps are formed once.
  const Matrix& a = cl.a_cl;
  const Vector b = cl.b_cl.col(0);
  const Matrix id = Matrix::Identity(n_cl, n_cl);
  const Matrix ha = dt * a;
  const Matrix ha2 = ha * ha;
  const Matrix ha3 = ha2 * ha;
  const Matrix ha4 = ha3 * ha;
  const Matrix phi = id + ha + ha2 / 2.0 + ha3 / 6.0 + ha4 / 24.0;
  const Vector g0 = dt * (id / 6.0 + ha / 6.0 + ha2 / 12.0 + ha3 / 24.0) * b;
  const Vector gh = dt * (2.0 * id / 3.0 + ha / 3.0 + ha2 / 12.0) * b;
  const Vector g1 = dt * (id / 6.0) * b;

  const Matrix u_map = model::InputConstraintMap(gains, plant);
  const Matrix& c = plant.c();

  const long stored = steps / options.decimation + 1;
  Trajectory traj;
  traj.times.reserve(stored);
  traj.states.resize(stored, n_cl);
  traj.inputs.resize(stored, m);
  traj.outputs.resize(stored);
  traj.references.resize(stored);
  traj.errors.resize(stored);

  Vector x = x0;
  Vector next(n_cl);
  Vector u(m);
  Eigen::Index row = 0;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double r = EvalReference(sig, t);
    u.noalias() = u_map.leftCols(n_cl) * x;
    u += u_map.col(n_cl) * r;
    if (options.observer) options.observer(t, x, u, r);
    if (k % options.decimation == 0) {
      const double y = (c * x.head(n))(0, 0);
      traj.times.push_back(t);
      traj.states.row(row) = x.transpose();
      traj.inputs.row(row) = u.transpose();
      traj.outputs[row] = y;
      traj.references[row] = r;
      traj.errors[row] = r - y;
      ++row;
    }
    if (k == steps) break;
    const double rh = EvalReference(sig, t + 0.5 * dt);
    const double r1 = EvalReference(sig, t + dt);
    next.noalias() = phi * x;
    next += g0 * r + gh * rh + g1 * r1;
    x.swap(next);
    if (!x.allFinite()) {
      throw NonFiniteState("Simulate: state left the finite range at t = " +
                           std::to_string(t + dt));
    }
  }
  return traj;
}

const char* ToString(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kState:
      return "state";
    case Violation::Kind::kInput:
      return "input";
    case Violation::Kind::kInvariant:
      return "invariant";
  }
  return "?";
}

ConstraintMonitor::ConstraintMonitor(
    const model::PlantModel& plant, const model::StateConstraint& xc,
    const model::InputConstraint& uc,
    std::optional<polyhedra::Polyhedron> invariant, double tol)
    : x_mat_(xc.x_mat),
      u_mat_(uc.u_mat),
      invariant_(std::move(invariant)),
      tol_(tol),
      n_(plant.n()) {
  xc.Validate(plant.n());
  uc.Validate(plant.m());
  if (invariant_) {
    invariant_->Validate();
    if (invariant_->dim() != plant.n() + 2) {
      throw DimensionMismatch("ConstraintMonitor: invariant set dimension");
    }
  }
}

void ConstraintMonitor::Report(Violation::Kind kind, double t,
                               const Vector& lhs, const Vector& rhs) {
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    const double excess = lhs[i] - rhs[i];
    if (excess > tol_) {
      ++count_;
      if (violations_.size() < limit_) {
        violations_.push_back({kind, t, i, excess});
      }
    }
  }
}

void ConstraintMonitor::Observe(double t, const Vector& x_cl, const Vector& u) {
  Report(Violation::Kind::kState, t, x_mat_ * x_cl.head(n_),
         Vector::Ones(x_mat_.rows()));
  Report(Violation::Kind::kInput, t, u_mat_ * u, Vector::Ones(u_mat_.rows()));
  if (invariant_) {
    Report(Violation::Kind::kInvariant, t, invariant_->shape * x_cl,
           invariant_->offset);
  }
}

StepObserver ConstraintMonitor::AsObserver() {
  return [this](double t, const Vector& x_cl, const Vector& u, double) {
    Observe(t, x_cl, u);
  };
}

std::vector<Violation> Monitor(const Trajectory& traj,
                               const model::PlantModel& plant,
                               const model::StateConstraint& xc,
                               const model::InputConstraint& uc,
                               const std::optional<polyhedra::Polyhedron>& inv,
                               double tol) {
  ConstraintMonitor mon(plant, xc, uc, inv, tol);
  for (Eigen::Index k = 0; k < traj.size(); ++k) {
    mon.Observe(traj.times[k], traj.states.row(k).transpose(),
                traj.inputs.row(k).transpose());
  }
  return mon.violations();
}

void WriteTrajectoryCsv(std::ostream& os, const Trajectory& traj,
                        Eigen::Index n) {
  const Eigen::Index m = traj.inputs.cols();
  os << "t";
  for (Eigen::Index j = 0; j < n; ++j) os << ",x" << j + 1;
  os << ",x_I1,x_I2";
  if (m == 1) {
    os << ",u";
  } else {
    for (Eigen::Index j = 0; j < m; ++j) os << ",u" << j + 1;
  }
  os << ",y,r,e\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), ",%.12g", v);
    os << buf;
  };
  for (Eigen::Index k = 0; k < traj.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.12g", traj.times[k]);
    os << buf;
    for (Eigen::Index j = 0; j < traj.states.cols(); ++j) put(traj.states(k, j));
    for (Eigen::Index j = 0; j < m; ++j) put(traj.inputs(k, j));
    put(traj.outputs[k]);
    put(traj.references[k]);
    put(traj.errors[k]);
    os << '\n';
  }
}

}  // namespace rpitrack::sim
