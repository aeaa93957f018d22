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

#include <istream>
#include <string>

#include "rpitrack/certify/text_format.h"
#include "rpitrack/sim/reference.h"
#include "rpitrack/sim/simulate.h"
#include "rpitrack/synth/synthesis.h"

namespace rpitrack::cli {

struct SimulationSpec {
  sim::ReferenceSignal signal = sim::TwoTankProfile();
  double horizon = 400.0;
  double dt = sim::kDefaultDt;
  int decimation = 10;
};

/// A parsed problem file.
///
///   [plant]        A, B, C
///   [constraints]  X or x_lower/x_upper; U or u_bound
///   [reference]    kind = ramp | sinusoid, omega
///   [synthesis]    objective, l, seed, restarts, max_outer_iters, threads,
///                  rho_min, rho_max, box_<group> = [lo hi], v_abs
///   [simulation]   signal, horizon, dt, decimation
///
/// [synthesis] and [simulation] are optional. Unknown keys are errors.
struct ProblemFile {
  synth::SynthesisProblem problem;
  synth::SynthesisOptions synthesis;
  SimulationSpec simulation;
};

/// Throws ParseError for malformed text and for values the model types
/// reject, anchored at the offending line.
ProblemFile ParseProblem(const certify::TextDocument& doc);
ProblemFile ParseProblem(std::istream& is);
ProblemFile ParseProblemFile(const std::string& path);

/// Reference signal from a compact string:
///
///   profile                          the two-tank piecewise ramp
///   constant:<v>
///   ramp:slope=<s>,intercept=<c>
///   sinusoid:a=<a>,w=<w>,phase=<p>   w defaults to 1, phase to 0
///   piecewise:<t>/<slope>/<intercept>;<t>/<slope>/<intercept>;...
///
/// Throws ParseError (line 0) for anything else.
sim::ReferenceSignal ParseSignalSpec(const std::string& spec);

}  // namespace rpitrack::cli
