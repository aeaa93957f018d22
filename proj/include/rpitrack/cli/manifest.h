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
#include <string>
#include <vector>

namespace rpitrack::cli {

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  /// SHA-256 over the input files, each prefixed by its byte length.
  std::string input_digest;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  double wall_clock_s = 0.0;
  int exit_code = 0;
  bool passed = false;
  std::string summary;
};

/// Hex SHA-256 of the files in order. Throws Error if a file cannot be read.
std::string DigestFiles(const std::vector<std::string>& paths);

/// Hex SHA-256 of a byte string.
std::string Sha256Hex(const std::string& bytes);

std::string ManifestJson(const RunManifest& manifest);

/// Writes `contents` to a sibling temporary file and renames it over
/// `path`. Throws Error on I/O failure.
void WriteFileAtomic(const std::string& path, const std::string& contents);

}  // namespace rpitrack::cli
