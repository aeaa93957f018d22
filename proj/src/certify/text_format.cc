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

#include "rpitrack/certify/text_format.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "rpitrack/errors.h"

namespace rpitrack::certify {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ParseDouble(const std::string& token, double* out) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v)) {
    return false;
  }
  *out = v;
  return true;
}

std::vector<double> ParseRow(const std::string& text, int line) {
  std::vector<double> row;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    double v;
    if (!ParseDouble(token, &v)) {
      throw ParseError(line, "invalid number '" + token + "'");
    }
    row.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\r') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return row;
}

Matrix RowsToMatrix(const std::vector<std::vector<double>>& rows,
                    const std::vector<int>& lines, int key_line) {
  if (rows.empty()) throw ParseError(key_line, "empty matrix");
  const size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ParseError(lines[i], "row has " + std::to_string(rows[i].size()) +
                                     " entries, expected " + std::to_string(cols));
    }
    for (size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

int TextSection::LineOf(const std::string& key) const {
  const TextEntry* e = Lookup(key);
  return e ? e->line : line_;
}

const TextEntry* TextSection::Lookup(const std::string& key) const {
  for (const TextEntry& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const TextEntry& TextSection::Require(const std::string& key) const {
  const TextEntry* e = Lookup(key);
  if (!e) throw ParseError(line_, "[" + name_ + "] is missing '" + key + "'");
  return *e;
}

const std::string& TextSection::String(const std::string& key) const {
  const TextEntry& e = Require(key);
  if (e.is_matrix) throw ParseError(e.line, "'" + key + "' must be a scalar");
  return e.scalar;
}

double TextSection::Number(const std::string& key) const {
  const TextEntry& e = Require(key);
  double v;
  if (e.is_matrix || !ParseDouble(e.scalar, &v)) {
    throw ParseError(e.line, "'" + key + "' must be a finite number");
  }
  return v;
}

double TextSection::Number(const std::string& key, double fallback) const {
  return Has(key) ? Number(key) : fallback;
}

std::int64_t TextSection::Integer(const std::string& key) const {
  const double v = Number(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ParseError(LineOf(key), "'" + key + "' must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::int64_t TextSection::Integer(const std::string& key, std::int64_t fallback) const {
  return Has(key) ? Integer(key) : fallback;
}

const Matrix& TextSection::Mat(const std::string& key) const {
  const TextEntry& e = Require(key);
  if (!e.is_matrix) throw ParseError(e.line, "'" + key + "' must be a [ ] matrix");
  return e.matrix;
}

Vector TextSection::Vec(const std::string& key) const {
  const Matrix& m = Mat(key);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.cols() == 1) return m.col(0);
  throw ParseError(LineOf(key), "'" + key + "' must be a vector");
}

std::optional<Vector> TextSection::OptVec(const std::string& key) const {
  if (!Has(key)) return std::nullopt;
  return Vec(key);
}

void TextSection::RejectUnknown(const std::vector<std::string>& allowed) const {
  for (const TextEntry& e : entries_) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      throw ParseError(e.line, "unknown key '" + e.key + "' in [" + name_ + "]");
    }
  }
}

void TextSection::Add(TextEntry entry) {
  if (Has(entry.key)) {
    throw ParseError(entry.line, "duplicate key '" + entry.key + "'");
  }
  entries_.push_back(std::move(entry));
}

TextDocument TextDocument::Parse(std::istream& is) {
  TextDocument doc;
  std::string raw;
  int line_no = 0;
  // Open multi-line matrix, if any.
  std::optional<TextEntry> open;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;

  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = Trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (open) {
      if (line == "]") {
        open->matrix = RowsToMatrix(rows, row_lines, open->line);
        doc.sections_.back().Add(std::move(*open));
        open.reset();
        continue;
      }
      if (line.find_first_of("[]=") != std::string::npos) {
        throw ParseError(line_no, "expected a matrix row or ']'");
      }
      rows.push_back(ParseRow(line, line_no));
      row_lines.push_back(line_no);
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(line_no, "malformed section header");
      }
      const std::string name = Trim(line.substr(1, line.size() - 2));
      if (name.empty() || name.find_first_of("[]= \t") != std::string::npos) {
        throw ParseError(line_no, "malformed section name");
      }
      if (doc.Has(name)) throw ParseError(line_no, "duplicate section [" + name + "]");
      doc.sections_.emplace_back(name, line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (doc.sections_.empty()) throw ParseError(line_no, "entry outside any section");
    TextEntry entry;
    entry.key = Trim(line.substr(0, eq));
    entry.line = line_no;
    if (entry.key.empty() || entry.key.find_first_of(" \t[]") != std::string::npos) {
      throw ParseError(line_no, "malformed key");
    }
    const std::string value = Trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError(line_no, "missing value for '" + entry.key + "'");
    if (value.front() == '[') {
      entry.is_matrix = true;
      const auto close = value.find(']');
      if (close == std::string::npos) {
        if (Trim(value.substr(1)).size() > 0) {
          throw ParseError(line_no, "matrix rows start on the line after '['");
        }
        open = std::move(entry);
        rows.clear();
        row_lines.clear();
        continue;
      }
      if (close != value.size() - 1) throw ParseError(line_no, "text after ']'");
      const std::string body = value.substr(1, close - 1);
      std::vector<std::vector<double>> inline_rows;
      std::vector<int> inline_lines;
      size_t start = 0;
      for (;;) {
        const auto semi = body.find(';', start);
        inline_rows.push_back(ParseRow(body.substr(start, semi - start), line_no));
        inline_lines.push_back(line_no);
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
      entry.matrix = RowsToMatrix(inline_rows, inline_lines, line_no);
    } else {
      entry.scalar = value;
    }
    doc.sections_.back().Add(std::move(entry));
  }
  if (open) throw ParseError(open->line, "matrix '" + open->key + "' is not closed");
  return doc;
}

TextDocument TextDocument::ParseFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return Parse(in);
}

bool TextDocument::Has(const std::string& section) const {
  return std::any_of(sections_.begin(), sections_.end(),
                     [&](const TextSection& s) { return s.name() == section; });
}

const TextSection& TextDocument::Section(const std::string& section) const {
  for (const TextSection& s : sections_) {
    if (s.name() == section) return s;
  }
  throw ParseError(0, "missing section [" + section + "]");
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteScalar(std::ostream& os, const std::string& key, double v) {
  os << key << " = " << FormatNumber(v) << "\n";
}

void WriteMatrix(std::ostream& os, const std::string& key, const Matrix& m) {
  auto row = [&](Eigen::Index i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ' ';
      os << FormatNumber(m(i, j));
    }
  };
  if (m.rows() == 1) {
    os << key << " = [";
    row(0);
    os << "]\n";
    return;
  }
  os << key << " = [\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    row(i);
    os << "\n";
  }
  os << "]\n";
}

}  // namespace rpitrack::certify
