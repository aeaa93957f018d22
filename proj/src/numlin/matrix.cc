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

#include "rpitrack/numlin/matrix.h"

#include <string>

#include "rpitrack/errors.h"

namespace rpitrack::numlin {

void RequireFinite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw DimensionMismatch(std::string(what) + ": non-finite entry");
  }
}

void RequireShape(const Eigen::Ref<const Matrix>& m, Eigen::Index rows,
                  Eigen::Index cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionMismatch(std::string(what) + ": expected " +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

double MaxAbs(const Eigen::Ref<const Matrix>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace rpitrack::numlin
