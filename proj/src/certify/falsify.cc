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

#include "rpitrack/certify/falsify.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rpitrack/errors.h"
#include "rpitrack/polyhedra/vertices.h"
#include "rpitrack/sim/simulate.h"

namespace rpitrack::certify {

const char* ToString(FalsifyViolation::Kind kind) {
  switch (kind) {
    case FalsifyViolation::Kind::kInvariant:
      return "invariant";
    case FalsifyViolation::Kind::kState:
      return "state";
    case FalsifyViolation::Kind::kInput:
      return "input";
  }
  return "?";
}

namespace {

// Scales x onto the boundary of {L x <= 1}; the origin is interior.
Vector ToBoundary(const Matrix& l_cl, const Vector& x) {
  const double s = (l_cl * x).maxCoeff();
  return s > 0.0 ? Vector(x / s) : x;
}

sim::PiecewiseRamp TriangleWave(double hi, double lo, double half_period,
                                double horizon, bool rising) {
  sim::PiecewiseRamp wave;
  const double slope = (hi - lo) / half_period;
  // Start at the midpoint and head towards one extreme.
  double t0 = 0.0;
  double r0 = 0.5 * (hi + lo);
  bool up = rising;
  while (t0 <= horizon + half_period) {
    const double target = up ? hi : lo;
    const double s = up ? slope : -slope;
    wave.segments.push_back({t0, s, r0 - s * t0});
    t0 += std::abs(target - r0) / slope;
    r0 = target;
    up = !up;
  }
  return wave;
}

}  // namespace

std::vector<FalsifyScenario> FalsifyScenarios(const Certificate& cert,
                                              const model::ReferenceClass& ref,
                                              const FalsifyOptions& opts) {
  const Matrix& lc = cert.inv.l_cl;
  const Eigen::Index n_cl = lc.cols();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Vector> vertices;
  if (n_cl <= polyhedra::kMaxVertexDim) {
    vertices = polyhedra::Vertices(cert.inv.AsPolyhedron());
  }

  const double hi = cert.rho[0];
  const double lo = -cert.rho[1];
  const double amp = std::min(cert.rho[0], cert.rho[1]);

  std::vector<FalsifyScenario> out;
  for (int s = 0; s < opts.n_samples; ++s) {
    FalsifyScenario sc;
    Vector x = Vector::Zero(n_cl);
    if (!vertices.empty()) {
      const int picks = 1 + static_cast<int>(unit(rng) * 3.0) % 3;
      double total = 0.0;
      for (int k = 0; k < picks; ++k) {
        const size_t idx = static_cast<size_t>(unit(rng) * vertices.size()) %
                           vertices.size();
        const double w = -std::log(1.0 - unit(rng));
        x += w * vertices[idx];
        total += w;
      }
      x /= total;
    } else {
      for (Eigen::Index j = 0; j < n_cl; ++j) x[j] = gauss(rng);
    }
    sc.x0 = ToBoundary(lc, x);

    switch (s % 4) {
      case 0:
        sc.reference = sim::Ramp{0.0, hi};
        sc.label = "constant upper";
        break;
      case 1:
        sc.reference = sim::Ramp{0.0, lo};
        sc.label = "constant lower";
        break;
      case 2: {
        const double half = 1.0 + 59.0 * unit(rng);
        sc.reference = TriangleWave(hi, lo, half, opts.horizon, unit(rng) < 0.5);
        sc.label = "triangle";
        break;
      }
      default: {
        const double w =
            ref.omega > 0.0 ? ref.omega : 0.05 + 1.95 * unit(rng);
        sc.reference = sim::Sinusoid{amp, w, 2.0 * std::numbers::pi * unit(rng)};
        sc.label = "sinusoid";
        break;
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<FalsifyViolation> FalsifyBySimulation(
    const Certificate& cert, const model::PlantModel& plant,
    const model::StateConstraint& xc, const model::InputConstraint& uc,
    const model::ReferenceClass& ref, const FalsifyOptions& opts) {
  const Eigen::Index n = plant.n();
  const Matrix& lc = cert.inv.l_cl;
  Matrix x_cl = Matrix::Zero(xc.x_mat.rows() + 4, n + 2);
  x_cl.topLeftCorner(xc.x_mat.rows(), n) = xc.x_mat;
  x_cl.bottomRightCorner(4, 2) = cert.xi.AsMatrix();
  const Matrix& u_mat = uc.u_mat;

  model::ReferenceClass loop_ref = ref;
  loop_ref.rho = cert.rho;
  const model::ClosedLoop cl = model::BuildClosedLoop(plant, cert.gains, loop_ref);

  std::vector<FalsifyViolation> found;
  const std::vector<FalsifyScenario> scenarios = FalsifyScenarios(cert, ref, opts);
  for (size_t s = 0; s < scenarios.size(); ++s) {
    int reported = 0;
    const int sample = static_cast<int>(s);
    auto report = [&](FalsifyViolation::Kind kind, double t, const Vector& lhs,
                      const Vector& x) {
      Eigen::Index row;
      const double worst = lhs.maxCoeff(&row);
      if (worst <= 1.0 + opts.tol || reported >= opts.max_reports_per_sample) {
        return;
      }
      ++reported;
      found.push_back({kind, sample, t, row, worst - 1.0, x});
    };
    Vector lx(lc.rows()), xx(x_cl.rows()), uu(u_mat.rows());
    sim::SimOptions so;
    so.decimation = 1 << 30;
    so.observer = [&](double t, const Vector& x, const Vector& u, double) {
      lx.noalias() = lc * x;
      report(FalsifyViolation::Kind::kInvariant, t, lx, x);
      xx.noalias() = x_cl * x;
      report(FalsifyViolation::Kind::kState, t, xx, x);
      uu.noalias() = u_mat * u;
      report(FalsifyViolation::Kind::kInput, t, uu, x);
    };
    try {
      sim::Simulate(cl, cert.gains, plant, scenarios[s].reference, scenarios[s].x0,
                    opts.horizon, opts.dt, so);
    } catch (const NonFiniteState&) {
      found.push_back({FalsifyViolation::Kind::kInvariant, sample, opts.horizon, 0,
                       numlin::kInf, scenarios[s].x0});
    }
  }
  return found;
}

}  // namespace rpitrack::certify
