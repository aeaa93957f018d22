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

#include <stdexcept>
#include <string>

namespace rpitrack {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree, or a matrix holds a non-finite entry.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The simplex iteration could not make progress (pivot breakdown or
/// iteration cap).
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

class TooHighDimensional : public Error {
 public:
  using Error::Error;
};

class EmptyInner : public Error {
 public:
  using Error::Error;
};

/// Plant data violates a structural assumption (controllability,
/// observability, single output).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// Option values outside their documented ranges.
class InvalidOptions : public Error {
 public:
  using Error::Error;
};

class NoStabilizingGains : public Error {
 public:
  using Error::Error;
};

class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

class PhaseInfeasible : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rpitrack
