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

#include "rpitrack/cli/problem.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <utility>

#include "rpitrack/errors.h"
#include "rpitrack/model/closed_loop.h"

namespace rpitrack::cli {

namespace {

using certify::TextDocument;
using certify::TextSection;

constexpr double kTransmissionZeroTol = 1e-8;

// Runs `make`, turning model-level errors into a ParseError at `line`.
template <typename F>
auto AtLine(int line, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

double SpecNumber(const std::string& text, const std::string& spec) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ParseError(0, "invalid number '" + text + "' in signal '" + spec + "'");
  }
  return v;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

// k=v pairs; every key must be in `allowed`.
std::map<std::string, double> KeyValues(const std::string& body, const std::string& spec,
                                        const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  if (body.empty()) return out;
  for (const std::string& item : Split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError(0, "expected key=value in signal '" + spec + "'");
    }
    const std::string key = item.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(0, "unknown key '" + key + "' in signal '" + spec + "'");
    }
    if (!out.emplace(key, SpecNumber(item.substr(eq + 1), spec)).second) {
      throw ParseError(0, "duplicate key '" + key + "' in signal '" + spec + "'");
    }
  }
  return out;
}

double Get(const std::map<std::string, double>& kv, const std::string& key,
           std::optional<double> fallback, const std::string& spec) {
  const auto it = kv.find(key);
  if (it != kv.end()) return it->second;
  if (!fallback) throw ParseError(0, "signal '" + spec + "' needs '" + key + "'");
  return *fallback;
}

model::PlantModel ParsePlant(const TextSection& s) {
  s.RejectUnknown({"A", "B", "C"});
  const Matrix& a = s.Mat("A");
  Matrix b = s.Mat("B");
  const Matrix& c = s.Mat("C");
  // A single-input B may be written as a row.
  if (b.rows() == 1 && b.cols() == a.rows() && a.rows() > 1) b.transposeInPlace();
  return AtLine(s.line(), [&] { return model::PlantModel(a, b, c); });
}

std::pair<model::StateConstraint, model::InputConstraint> ParseConstraints(
    const TextSection& s, const model::PlantModel& plant) {
  s.RejectUnknown({"X", "x_lower", "x_upper", "U", "u_bound"});
  model::StateConstraint xc;
  if (s.Has("X")) {
    if (s.Has("x_lower") || s.Has("x_upper")) {
      throw ParseError(s.LineOf("X"), "give either X or x_lower/x_upper");
    }
    xc.x_mat = s.Mat("X");
    AtLine(s.LineOf("X"), [&] { xc.Validate(plant.n()); });
  } else {
    const Vector lo = s.Vec("x_lower");
    const Vector hi = s.Vec("x_upper");
    xc = AtLine(s.LineOf("x_lower"), [&] {
      model::StateConstraint out = model::StateConstraint::FromBox(lo, hi);
      out.Validate(plant.n());
      return out;
    });
  }
  model::InputConstraint uc;
  if (s.Has("U")) {
    if (s.Has("u_bound")) throw ParseError(s.LineOf("U"), "give either U or u_bound");
    uc.u_mat = s.Mat("U");
    AtLine(s.LineOf("U"), [&] { uc.Validate(plant.m()); });
  } else {
    const Vector bound = s.Vec("u_bound");
    uc = AtLine(s.LineOf("u_bound"), [&] {
      model::InputConstraint out = model::InputConstraint::Symmetric(bound);
      out.Validate(plant.m());
      return out;
    });
  }
  return {xc, uc};
}

model::ReferenceClass ParseReference(const TextSection& s) {
  s.RejectUnknown({"kind", "omega"});
  const std::string& kind = s.String("kind");
  if (kind == "ramp") {
    if (s.Has("omega")) throw ParseError(s.LineOf("omega"), "a ramp class has no omega");
    return model::ReferenceClass::Ramp(Vector::Constant(2, 1.0));
  }
  if (kind == "sinusoid") {
    const double omega = s.Number("omega");
    return AtLine(s.LineOf("omega"), [&] {
      model::ReferenceClass ref = model::ReferenceClass::Sinusoid(omega, Vector::Constant(2, 1.0));
      ref.Validate();
      return ref;
    });
  }
  throw ParseError(s.LineOf("kind"), "reference kind must be ramp or sinusoid");
}

certify::VarBox ParseBox(const TextSection& s, const std::string& key,
                         certify::VarBox fallback) {
  if (!s.Has(key)) return fallback;
  const Vector v = s.Vec(key);
  if (v.size() != 2 || !(v[0] <= v[1])) {
    throw ParseError(s.LineOf(key), "'" + key + "' must be [lo hi] with lo <= hi");
  }
  return {v[0], v[1]};
}

Vector ParseRho(const TextSection& s, const std::string& key, const Vector& fallback) {
  if (!s.Has(key)) return fallback;
  const Vector v = s.Vec(key);
  if (v.size() == 1) return Vector::Constant(2, v[0]);
  if (v.size() != 2) throw ParseError(s.LineOf(key), "'" + key + "' must have 1 or 2 entries");
  return v;
}

int ParsePositiveInt(const TextSection& s, const std::string& key, int fallback, int min) {
  const std::int64_t v = s.Integer(key, fallback);
  if (v < min || v > 1'000'000'000) {
    throw ParseError(s.LineOf(key), "'" + key + "' must be an integer >= " + std::to_string(min));
  }
  return static_cast<int>(v);
}

synth::SynthesisOptions ParseSynthesis(const TextSection& s) {
  s.RejectUnknown({"objective", "l", "seed", "restarts", "max_outer_iters", "threads",
                   "rho_min", "rho_max", "conv_tol", "mu", "v_abs", "box_h_offdiag",
                   "box_h_diag", "box_h_r", "box_t", "box_q", "box_q_r", "box_l",
                   "box_gains", "box_xi", "box_gamma"});
  synth::SynthesisOptions o;
  if (s.Has("objective")) {
    const std::string& obj = s.String("objective");
    if (obj == "phi1") {
      o.objective = synth::Objective::kPhi1;
    } else if (obj == "phi2") {
      o.objective = synth::Objective::kPhi2;
    } else {
      throw ParseError(s.LineOf("objective"), "objective must be phi1 or phi2");
    }
  }
  o.l_rows = ParsePositiveInt(s, "l", static_cast<int>(o.l_rows), 1);
  const std::int64_t seed = s.Integer("seed", static_cast<std::int64_t>(o.rng_seed));
  if (seed < 0) throw ParseError(s.LineOf("seed"), "'seed' must be non-negative");
  o.rng_seed = static_cast<std::uint64_t>(seed);
  o.restarts = ParsePositiveInt(s, "restarts", o.restarts, 1);
  o.max_outer_iters = ParsePositiveInt(s, "max_outer_iters", o.max_outer_iters, 0);
  o.threads = ParsePositiveInt(s, "threads", o.threads, 0);
  o.rho_min = ParseRho(s, "rho_min", o.rho_min);
  o.rho_max = ParseRho(s, "rho_max", o.rho_max);
  o.conv_tol = s.Number("conv_tol", o.conv_tol);
  o.mu = s.Number("mu", o.mu);
  certify::VariableBoxes& b = o.var_box;
  b.v_abs = s.Number("v_abs", b.v_abs);
  b.h_offdiag = ParseBox(s, "box_h_offdiag", b.h_offdiag);
  b.h_diag = ParseBox(s, "box_h_diag", b.h_diag);
  b.h_r = ParseBox(s, "box_h_r", b.h_r);
  b.t = ParseBox(s, "box_t", b.t);
  b.q = ParseBox(s, "box_q", b.q);
  b.q_r = ParseBox(s, "box_q_r", b.q_r);
  b.l = ParseBox(s, "box_l", b.l);
  b.gains = ParseBox(s, "box_gains", b.gains);
  b.xi = ParseBox(s, "box_xi", b.xi);
  b.gamma = ParseBox(s, "box_gamma", b.gamma);
  return o;
}

SimulationSpec ParseSimulation(const TextSection& s) {
  s.RejectUnknown({"signal", "horizon", "dt", "decimation"});
  SimulationSpec spec;
  if (s.Has("signal")) {
    const std::string& text = s.String("signal");
    spec.signal = AtLine(s.LineOf("signal"), [&] { return ParseSignalSpec(text); });
  }
  spec.horizon = s.Number("horizon", spec.horizon);
  spec.dt = s.Number("dt", spec.dt);
  if (!(spec.horizon > 0.0)) throw ParseError(s.LineOf("horizon"), "'horizon' must be positive");
  if (!(spec.dt > 0.0) || spec.dt > spec.horizon) {
    throw ParseError(s.LineOf("dt"), "'dt' must be in (0, horizon]");
  }
  spec.decimation = ParsePositiveInt(s, "decimation", spec.decimation, 1);
  return spec;
}

}  // namespace

ProblemFile ParseProblem(const TextDocument& doc) {
  for (const TextSection& s : doc.sections()) {
    const std::string& n = s.name();
    if (n != "plant" && n != "constraints" && n != "reference" && n != "synthesis" &&
        n != "simulation") {
      throw ParseError(s.line(), "unknown section [" + n + "]");
    }
  }
  const model::PlantModel plant = ParsePlant(doc.Section("plant"));
  auto [xc, uc] = ParseConstraints(doc.Section("constraints"), plant);
  const model::ReferenceClass ref = ParseReference(doc.Section("reference"));
  if (!model::TransmissionZeroCheck(plant, ref, kTransmissionZeroTol)) {
    throw ParseError(doc.Section("reference").line(),
                     "the plant has a transmission zero at a pole of the reference class");
  }
  ProblemFile out{{plant, std::move(xc), std::move(uc), ref}, {}, {}};
  if (doc.Has("synthesis")) {
    const TextSection& s = doc.Section("synthesis");
    out.synthesis = ParseSynthesis(s);
    AtLine(s.line(), [&] { out.synthesis.Validate(plant.n() + 2); });
  }
  if (doc.Has("simulation")) out.simulation = ParseSimulation(doc.Section("simulation"));
  return out;
}

ProblemFile ParseProblem(std::istream& is) { return ParseProblem(TextDocument::Parse(is)); }

ProblemFile ParseProblemFile(const std::string& path) {
  return ParseProblem(TextDocument::ParseFile(path));
}

sim::ReferenceSignal ParseSignalSpec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  sim::ReferenceSignal sig;
  if (kind == "profile" && colon == std::string::npos) {
    sig = sim::TwoTankProfile();
  } else if (kind == "constant") {
    sig = sim::Ramp{0.0, SpecNumber(body, spec)};
  } else if (kind == "ramp") {
    const auto kv = KeyValues(body, spec, {"slope", "intercept"});
    sig = sim::Ramp{Get(kv, "slope", std::nullopt, spec), Get(kv, "intercept", 0.0, spec)};
  } else if (kind == "sinusoid") {
    const auto kv = KeyValues(body, spec, {"a", "w", "phase"});
    sig = sim::Sinusoid{Get(kv, "a", std::nullopt, spec), Get(kv, "w", 1.0, spec),
                        Get(kv, "phase", 0.0, spec)};
  } else if (kind == "piecewise" && !body.empty()) {
    sim::PiecewiseRamp pw;
    for (const std::string& seg : Split(body, ';')) {
      const std::vector<std::string> f = Split(seg, '/');
      if (f.size() != 3) {
        throw ParseError(0, "piecewise segments are t/slope/intercept in '" + spec + "'");
      }
      pw.segments.push_back(
          {SpecNumber(f[0], spec), SpecNumber(f[1], spec), SpecNumber(f[2], spec)});
    }
    sig = pw;
  } else {
    throw ParseError(0, "unknown signal '" + spec + "'");
  }
  try {
    sim::ValidateReference(sig);
  } catch (const Error& e) {
    throw ParseError(0, "signal '" + spec + "': " + e.what());
  }
  return sig;
}

}  // namespace rpitrack::cli
