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
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rpitrack/numlin/matrix.h"

namespace rpitrack::certify {

/// Sectioned text files shared by certificates and problem files:
///
///   # comment
///   [section]
///   key = value
///   row = [1 2 3]
///   mat = [
///     1 2
///     3 4
///   ]
///
/// Single-line matrices separate rows with ';'. Entries are separated by
/// whitespace or commas.
struct TextEntry {
  std::string key;
  int line = 0;
  bool is_matrix = false;
  std::string scalar;
  Matrix matrix;
};

class TextSection {
 public:
  TextSection(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }
  const std::vector<TextEntry>& entries() const { return entries_; }

  bool Has(const std::string& key) const { return Lookup(key) != nullptr; }
  /// Line of `key`, or of the section header when absent.
  int LineOf(const std::string& key) const;

  // Accessors throw ParseError naming the line of the offending entry, or
  // the section header line when a required key is missing.
  const std::string& String(const std::string& key) const;
  double Number(const std::string& key) const;
  double Number(const std::string& key, double fallback) const;
  std::int64_t Integer(const std::string& key) const;
  std::int64_t Integer(const std::string& key, std::int64_t fallback) const;
  const Matrix& Mat(const std::string& key) const;
  /// A matrix with a single row or a single column.
  Vector Vec(const std::string& key) const;
  std::optional<Vector> OptVec(const std::string& key) const;

  /// Throws ParseError on the first key not in `allowed`.
  void RejectUnknown(const std::vector<std::string>& allowed) const;

  void Add(TextEntry entry);

 private:
  const TextEntry* Lookup(const std::string& key) const;
  const TextEntry& Require(const std::string& key) const;

  std::string name_;
  int line_;
  std::vector<TextEntry> entries_;
};

class TextDocument {
 public:
  /// Throws ParseError with the line of the first malformed construct.
  static TextDocument Parse(std::istream& is);
  static TextDocument ParseFile(const std::string& path);

  bool Has(const std::string& section) const;
  const TextSection& Section(const std::string& section) const;
  const std::vector<TextSection>& sections() const { return sections_; }

 private:
  std::vector<TextSection> sections_;
};

/// "%.17g".
std::string FormatNumber(double v);
void WriteScalar(std::ostream& os, const std::string& key, double v);
/// Multi-line form unless the matrix has a single row.
void WriteMatrix(std::ostream& os, const std::string& key, const Matrix& m);

}  // namespace rpitrack::certify
