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


#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "rpitrack/errors.h"
#include "rpitrack/synth/synthesis.h"

namespace rpitrack::synth {

namespace {

// Objective values closer than this count as a tie.
constexpr double kTieTol = 1e-12;

struct RestartOutcome {
  std::optional<SynthesisResult> result;
  std::vector<std::string> log;
  std::string failure;
  std::exception_ptr error;
};

std::string LogLine(int restart, int iter, const char* phase, const char* status,
                    double merit, double gamma) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "restart=%d iter=%d phase=%s status=%s merit=%.12g gamma=%.6g",
                restart, iter, phase, status, merit, gamma);
  return buf;
}

RestartOutcome RunRestart(const SynthesisProblem& problem, const SynthesisOptions& opts,
                          int r) {
  RestartOutcome out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Iterate it;
  try {
    it = Initialize(problem, opts, r);
  } catch (const NoStabilizingGains& e) {
    out.log.push_back(LogLine(r, 0, "init", "no_stabilizing_gains", nan, nan));
    out.failure = e.what();
    return out;
  } catch (const NoFeasiblePoint& e) {
    out.log.push_back(LogLine(r, 0, "init", "infeasible", nan, nan));
    out.failure = e.what();
    return out;
  }
  out.log.push_back(LogLine(r, 0, "init", "accepted", it.merit, it.cert.gamma));

  SynthesisResult res;
  res.restart_index = r;
  res.history.push_back(ObjectiveValue(it.cert, opts.objective));
  res.merit_history.push_back(it.merit);
  int stalls = 0;
  int iter = 1;
  for (; iter <= opts.max_outer_iters; ++iter) {
    const double before = it.merit;
    bool moved = false;
    for (Phase phase : {Phase::kMultipliers, Phase::kGeometry}) {
      const char* status = "accepted";
      try {
        Iterate next = AlternateStep(problem, opts, it, phase);
        if (next.merit < it.merit) {
          status = "rejected_merit";
        } else if (!Acceptable(problem, opts, next.cert)) {
          status = "rejected_check";
        } else {
          it = std::move(next);
          moved = true;
        }
      } catch (const PhaseInfeasible&) {
        status = "infeasible";
      }
      out.log.push_back(LogLine(r, iter, ToString(phase), status, it.merit, it.cert.gamma));
    }
    res.history.push_back(ObjectiveValue(it.cert, opts.objective));
    res.merit_history.push_back(it.merit);
    // Both phases are deterministic: with nothing accepted the next sweep
    // would repeat this one.
    if (!moved) {
      res.converged = true;
      break;
    }
    stalls = it.merit - before < opts.conv_tol ? stalls + 1 : 0;
    if (stalls >= 3) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(iter, opts.max_outer_iters);
  res.objective_value = ObjectiveValue(it.cert, opts.objective);
  res.merit = it.merit;
  res.cert = std::move(it.cert);
  out.result = std::move(res);
  return out;
}

bool Better(const SynthesisResult& a, const SynthesisResult& b) {
  if (a.objective_value > b.objective_value + kTieTol) return true;
  if (a.objective_value < b.objective_value - kTieTol) return false;
  return a.cert.gamma > b.cert.gamma;
}

}  // namespace

SynthesisResult Synthesize(const SynthesisProblem& problem, const SynthesisOptions& opts,
                           const SynthesisLog& log) {
  const Eigen::Index n = problem.plant.n();
  opts.Validate(n + 2);
  problem.xc.Validate(n);
  problem.uc.Validate(problem.plant.m());
  problem.ref.Validate();
  if (!model::TransmissionZeroCheck(problem.plant, problem.ref, 1e-8)) {
    throw InvalidModel("Synthesize: the plant has a transmission zero at the reference modes");
  }

  const int restarts = opts.restarts;
  int workers = opts.threads > 0 ? opts.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, restarts);
  std::vector<RestartOutcome> outcomes(static_cast<size_t>(restarts));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int r = next++; r < restarts; r = next++) {
      try {
        outcomes[r] = RunRestart(problem, opts, r);
      } catch (...) {
        outcomes[r].error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  const SynthesisResult* best = nullptr;
  std::string first_failure;
  for (const RestartOutcome& o : outcomes) {
    if (o.error) std::rethrow_exception(o.error);
    if (log) {
      for (const std::string& line : o.log) log(line);
    }
    if (o.result) {
      if (best == nullptr || Better(*o.result, *best)) best = &*o.result;
    } else if (first_failure.empty()) {
      first_failure = o.failure;
    }
  }
  if (best == nullptr) {
    throw NoFeasiblePoint("Synthesize: no restart certified a point (" + first_failure + ")");
  }
  if (log) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "best restart=%d objective=%.12g gamma=%.6g converged=%s",
                  best->restart_index, best->objective_value, best->cert.gamma,
                  best->converged ? "true" : "false");
    log(buf);
  }
  return *best;
}

}  // namespace rpitrack::synth
