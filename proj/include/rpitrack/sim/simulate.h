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

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rpitrack/model/closed_loop.h"
#include "rpitrack/model/plant.h"
#include "rpitrack/polyhedra/polyhedron.h"
#include "rpitrack/sim/reference.h"

namespace rpitrack::sim {

/// Stored samples; row k of each matrix belongs to times[k].
struct Trajectory {
  std::vector<double> times;
  Matrix states;   // samples x n_cl
  Matrix inputs;   // samples x m
  Vector outputs;
  Vector references;
  Vector errors;   // r - y

  Eigen::Index size() const { return static_cast<Eigen::Index>(times.size()); }
};

/// Called on every integration step (including t = 0) before decimation.
using StepObserver =
    std::function<void(double t, const Vector& x_cl, const Vector& u, double r)>;

struct SimOptions {
  int decimation = 10;
  StepObserver observer;
};

inline constexpr double kDefaultDt = 1e-3;

/// Fixed-step classic Runge-Kutta integration of xcl' = a_cl xcl + b_cl r(t)
/// from x0 over [0, horizon]. The input is rebuilt from the control law at
/// every sample.
///
/// Throws DimensionMismatch for inconsistent shapes or bad step data and
/// NonFiniteState as soon as the state stops being finite.
Trajectory Simulate(const model::ClosedLoop& cl,
                    const model::ControllerGains& gains,
                    const model::PlantModel& plant, const ReferenceSignal& sig,
                    const Vector& x0, double horizon, double dt,
                    const SimOptions& options = {});

struct Violation {
  enum class Kind { kState, kInput, kInvariant };
  Kind kind;
  double t;
  Eigen::Index row;
  double margin;  // amount by which the row exceeds 1 (or its offset)
};

const char* ToString(Violation::Kind kind);

/// Checks constraint rows sample by sample. Usable as a StepObserver.
class ConstraintMonitor {
 public:
  ConstraintMonitor(const model::PlantModel& plant,
                    const model::StateConstraint& xc,
                    const model::InputConstraint& uc,
                    std::optional<polyhedra::Polyhedron> invariant, double tol);

  void Observe(double t, const Vector& x_cl, const Vector& u);
  StepObserver AsObserver();

  const std::vector<Violation>& violations() const { return violations_; }
  size_t count() const { return count_; }

  /// Stop recording details after this many entries; count() keeps going.
  void set_limit(size_t limit) { limit_ = limit; }

 private:
  void Report(Violation::Kind kind, double t, const Vector& lhs,
              const Vector& rhs);

  Matrix x_mat_;
  Matrix u_mat_;
  std::optional<polyhedra::Polyhedron> invariant_;
  double tol_;
  Eigen::Index n_;
  std::vector<Violation> violations_;
  size_t count_ = 0;
  size_t limit_ = static_cast<size_t>(-1);
};

/// Every stored sample where X x > 1 + tol, U u > 1 + tol or
/// L x_cl > 1 + tol.
std::vector<Violation> Monitor(const Trajectory& traj,
                               const model::PlantModel& plant,
                               const model::StateConstraint& xc,
                               const model::InputConstraint& uc,
                               const std::optional<polyhedra::Polyhedron>& inv,
                               double tol);

/// Header t,x1..xn,x_I1,x_I2,u (u1..um when m > 1),y,r,e and 12 significant
/// digits per value.
void WriteTrajectoryCsv(std::ostream& os, const Trajectory& traj,
                        Eigen::Index n);

}  // namespace rpitrack::sim
