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
#include "rpitrack/sim/reference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rpitrack/errors.h"

namespace rpitrack::sim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double SegmentValue(const RampSegment& s, double t) {
  return s.slope * t + s.intercept;
}

}  // namespace

void ValidateReference(const ReferenceSignal& sig) {
  std::visit(
      Overloaded{
          [](const Ramp& r) {
            if (!std::isfinite(r.slope) || !std::isfinite(r.intercept)) {
              throw InvalidModel("Ramp reference: non-finite coefficient");
            }
          },
          [](const PiecewiseRamp& p) {
            if (p.segments.empty()) {
              throw InvalidModel("PiecewiseRamp: no segments");
            }
            if (p.segments.front().t_break != 0.0) {
              throw InvalidModel("PiecewiseRamp: first breakpoint must be 0");
            }
            for (size_t k = 0; k < p.segments.size(); ++k) {
              const RampSegment& s = p.segments[k];
              if (!std::isfinite(s.t_break) || !std::isfinite(s.slope) ||
                  !std::isfinite(s.intercept)) {
                throw InvalidModel("PiecewiseRamp: non-finite coefficient");
              }
              if (k > 0 && !(s.t_break > p.segments[k - 1].t_break)) {
                throw InvalidModel("PiecewiseRamp: breakpoints must increase");
              }
            }
          },
          [](const Sinusoid& s) {
            if (!std::isfinite(s.amplitude) || !std::isfinite(s.omega) ||
                !std::isfinite(s.phase) || s.omega < 0.0) {
              throw InvalidModel("Sinusoid reference: bad parameters");
            }
          },
      },
      sig);
  if (ContinuityGap(sig) > kContinuityTol) {
    throw InvalidModel("PiecewiseRamp: pieces do not join (gap " +
                       std::to_string(ContinuityGap(sig)) + ")");
  }
}

double ContinuityGap(const ReferenceSignal& sig) {
  const auto* p = std::get_if<PiecewiseRamp>(&sig);
  if (p == nullptr) return 0.0;
  double gap = 0.0;
  for (size_t k = 1; k < p->segments.size(); ++k) {
    const double t = p->segments[k].t_break;
    gap = std::max(gap, std::abs(SegmentValue(p->segments[k - 1], t) -
                                 SegmentValue(p->segments[k], t)));
  }
  return gap;
}

double EvalReference(const ReferenceSignal& sig, double t) {
  return std::visit(
      Overloaded{
          [t](const Ramp& r) { return r.slope * t + r.intercept; },
          [t](const PiecewiseRamp& p) {
            // Last segment whose breakpoint lies strictly before t.
            const auto it = std::lower_bound(
                p.segments.begin() + 1, p.segments.end(), t,
                [](const RampSegment& seg, double v) { return seg.t_break < v; });
            return SegmentValue(*(it - 1), t);
          },
          [t](const Sinusoid& s) {
            return s.amplitude * std::sin(s.omega * t + s.phase);
          },
      },
      sig);
}

std::pair<double, double> ReferenceRange(const ReferenceSignal& sig,
                                         double horizon) {
  if (const auto* p = std::get_if<PiecewiseRamp>(&sig)) {
    double lo = kInfinity;
    double hi = -kInfinity;
    for (size_t k = 0; k < p->segments.size(); ++k) {
      const double t0 = p->segments[k].t_break;
      if (k > 0 && t0 >= horizon) break;
      const double t1 = k + 1 < p->segments.size()
                            ? std::min(p->segments[k + 1].t_break, horizon)
                            : horizon;
      for (double t : {t0, t1}) {
        const double v = SegmentValue(p->segments[k], t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    return {lo, hi};
  }
  if (const auto* s = std::get_if<Sinusoid>(&sig)) {
    const double a = std::abs(s->amplitude);
    if (s->omega * horizon >= 2.0 * std::numbers::pi) return {-a, a};
    double lo = std::min(EvalReference(sig, 0.0), EvalReference(sig, horizon));
    double hi = std::max(EvalReference(sig, 0.0), EvalReference(sig, horizon));
    // Interior extrema at omega t + phase = pi/2 + k pi.
    if (s->omega > 0.0) {
      const double base = std::numbers::pi / 2.0 - s->phase;
      const double kmin = std::ceil((0.0 - base) / std::numbers::pi);
      for (double k = kmin;; k += 1.0) {
        const double t = (base + k * std::numbers::pi) / s->omega;
        if (t > horizon) break;
        const double v = EvalReference(sig, t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    return {lo, hi};
  }
  const double a = EvalReference(sig, 0.0);
  const double b = EvalReference(sig, horizon);
  return {std::min(a, b), std::max(a, b)};
}

bool ReferenceAdmissible(const ReferenceSignal& sig, const Vector& rho,
                         double horizon, double tol) {
  const auto [lo, hi] = ReferenceRange(sig, horizon);
  return hi <= rho[0] + tol && -lo <= rho[1] + tol;
}

PiecewiseRamp TwoTankProfile() {
  return PiecewiseRamp{{{0.0, 0.01, 0.0},
                        {30.0, -1.0 / 140.0, 18.0 / 35.0},
                        {100.0, 0.0, -0.2}}};
}

}  // namespace rpitrack::sim
