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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace rpitrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNoFeasiblePoint = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitInadmissible = 5;

struct GlobalFlags {
  /// Replaces the problem file's synthesis seed.
  std::optional<std::uint64_t> seed;
  /// Certificate check tolerance (synthesize, certify) or monitor tolerance
  /// (simulate). Each command has its own default.
  std::optional<double> tol;
  /// simulate: refuse references outside the certified set.
  bool strict = false;
  /// Every command writes `<command>.manifest.json` here.
  std::string out_dir = ".";
};

struct SynthesizeOverrides {
  std::optional<int> restarts;
  std::optional<int> threads;
  std::optional<int> max_outer_iters;
};

/// Writes certificate.txt, synthesis.log and the manifest into out_dir.
/// 0 certified, 2 parse error, 3 no certified point, 4 numerical failure.
int CmdSynthesize(const std::string& problem_path, const GlobalFlags& flags,
                  const SynthesizeOverrides& overrides, std::ostream& out,
                  std::ostream& err);

/// Prints the residual table. 0 passed, 1 failed, 2 parse or dimension
/// error.
int CmdCertify(const std::string& certificate_path, const std::string& problem_path,
               const GlobalFlags& flags, std::ostream& out, std::ostream& err);

/// Simulates the certified loop from the origin under `signal_spec` (the
/// problem's [simulation] signal when empty) and writes the decimated
/// trajectory to `out_csv` (out_dir/trajectory.csv when empty) plus
/// out_dir/violations.csv. A reference outside the certified set draws a
/// warning, or exit 5 under --strict. Otherwise 0 iff nothing was violated,
/// 1 if something was, 2 on parse errors.
int CmdSimulate(const std::string& problem_path, const std::string& certificate_path,
                const std::string& signal_spec, const std::string& out_csv,
                const GlobalFlags& flags, std::ostream& out, std::ostream& err);

/// Writes the counter-clockwise vertices of the projection of L_cl onto
/// `dims` to `out_csv` (out_dir/projection.csv when empty). 2 on parse
/// errors or out-of-range dims, 4 when the projection fails.
int CmdProject(const std::string& certificate_path, std::pair<int, int> dims,
               const std::string& out_csv, const GlobalFlags& flags, std::ostream& out,
               std::ostream& err);

}  // namespace rpitrack::cli
