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

#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "rpitrack/cli/commands.h"

int main(int argc, char** argv) {
  using namespace rpitrack::cli;

  CLI::App app{"Tracking controller synthesis with polyhedral invariant sets"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::uint64_t seed = 0;
  double tol = 0.0;
  auto* seed_opt = app.add_option("--seed", seed, "Synthesis seed (replaces the problem's)");
  auto* tol_opt = app.add_option("--tol", tol, "Check or monitor tolerance")
                      ->check(CLI::PositiveNumber);
  app.add_flag("--strict", flags.strict, "simulate: reject references outside the certified set");
  app.add_option("--out-dir", flags.out_dir, "Directory for outputs and manifests");

  std::string problem, certificate, signal, csv;
  SynthesizeOverrides overrides;
  std::pair<int, int> dims{0, 1};

  auto* syn = app.add_subcommand("synthesize", "Search for a certified controller");
  syn->add_option("problem", problem, "Problem file")->required();
  syn->add_option("--restarts", overrides.restarts, "Number of restarts")
      ->check(CLI::PositiveNumber);
  syn->add_option("--threads", overrides.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
  syn->add_option("--max-iters", overrides.max_outer_iters, "Alternating sweeps per restart")
      ->check(CLI::NonNegativeNumber);

  auto* cert = app.add_subcommand("certify", "Check a certificate against a problem");
  cert->add_option("certificate", certificate, "Certificate file")->required();
  cert->add_option("problem", problem, "Problem file")->required();

  auto* simc = app.add_subcommand("simulate", "Simulate the certified loop from the origin");
  simc->add_option("problem", problem, "Problem file")->required();
  simc->add_option("certificate", certificate, "Certificate file")->required();
  simc->add_option("--signal", signal,
                   "profile | constant:v | ramp:slope=s,intercept=c | "
                   "sinusoid:a=a,w=w,phase=p | piecewise:t/s/c;...");
  simc->add_option("--csv", csv, "Trajectory CSV path");

  auto* proj = app.add_subcommand("project", "Project the invariant set onto two coordinates");
  proj->add_option("certificate", certificate, "Certificate file")->required();
  proj->add_option("--dims", dims, "Two closed-loop coordinates, e.g. --dims 0 1");
  proj->add_option("--csv", csv, "Polygon CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }
  if (*seed_opt) flags.seed = seed;
  if (*tol_opt) flags.tol = tol;

  if (*syn) return CmdSynthesize(problem, flags, overrides, std::cout, std::cerr);
  if (*cert) return CmdCertify(certificate, problem, flags, std::cout, std::cerr);
  if (*simc) return CmdSimulate(problem, certificate, signal, csv, flags, std::cout, std::cerr);
  return CmdProject(certificate, dims, csv, flags, std::cout, std::cerr);
}
