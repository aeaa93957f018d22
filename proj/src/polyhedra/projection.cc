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
#include "rpitrack/polyhedra/projection.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "rpitrack/errors.h"
#include "rpitrack/polyhedra/vertices.h"

namespace rpitrack::polyhedra {

namespace {

constexpr double kZeroCoef = 1e-12;

// Scales every row to unit max-norm, drops all-zero rows and merges
// duplicates keeping the tightest offset.
Polyhedron Normalize(const Polyhedron& p) {
  std::vector<RowVector> rows;
  std::vector<double> offs;
  for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
    const double s = p.shape.row(i).cwiseAbs().maxCoeff();
    if (s <= kZeroCoef) {
      if (p.offset[i] < -kZeroCoef) throw EmptyInner("Project2d: empty set");
      continue;
    }
    const RowVector r = p.shape.row(i) / s;
    const double o = p.offset[i] / s;
    bool merged = false;
    for (size_t k = 0; k < rows.size(); ++k) {
      if ((rows[k] - r).cwiseAbs().maxCoeff() <= 1e-12) {
        offs[k] = std::min(offs[k], o);
        merged = true;
        break;
      }
    }
    if (!merged) {
      rows.push_back(r);
      offs.push_back(o);
    }
  }
  Polyhedron out;
  out.shape.resize(static_cast<Eigen::Index>(rows.size()), p.dim());
  out.offset.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) {
    out.shape.row(static_cast<Eigen::Index>(k)) = rows[k];
    out.offset[static_cast<Eigen::Index>(k)] = offs[k];
  }
  return out;
}

Polyhedron Eliminate(const Polyhedron& p, Eigen::Index col) {
  std::vector<Eigen::Index> pos, neg, zero;
  for (Eigen::Index i = 0; i < p.num_rows(); ++i) {
    const double a = p.shape(i, col);
    if (a > kZeroCoef) {
      pos.push_back(i);
    } else if (a < -kZeroCoef) {
      neg.push_back(i);
    } else {
      zero.push_back(i);
    }
  }
  const Eigen::Index rows =
      static_cast<Eigen::Index>(zero.size() + pos.size() * neg.size());
  Polyhedron out;
  out.shape.resize(rows, p.dim() - 1);
  out.offset.resize(rows);
  auto drop_col = [&](const RowVector& r) {
    RowVector s(p.dim() - 1);
    s << r.head(col), r.tail(p.dim() - col - 1);
    return s;
  };
  Eigen::Index k = 0;
  for (Eigen::Index i : zero) {
    out.shape.row(k) = drop_col(p.shape.row(i));
    out.offset[k++] = p.offset[i];
  }
  for (Eigen::Index i : pos) {
    for (Eigen::Index j : neg) {
      const double wi = -p.shape(j, col);
      const double wj = p.shape(i, col);
      out.shape.row(k) = drop_col(wi * p.shape.row(i) + wj * p.shape.row(j));
      out.offset[k++] = wi * p.offset[i] + wj * p.offset[j];
    }
  }
  return out;
}

}  // namespace

Polyhedron RemoveRedundantRows(const Polyhedron& poly) {
  Polyhedron cur = poly;
  Eigen::Index i = 0;
  while (i < cur.num_rows() && cur.num_rows() > 1) {
    // Row i is kept loosened by one so the support LP stays bounded.
    Polyhedron relaxed = cur;
    relaxed.offset[i] += 1.0;
    const std::optional<double> s =
        Support(relaxed, cur.shape.row(i).transpose());
    if (s && *s <= cur.offset[i] + 1e-9) {
      const Eigen::Index tail = cur.num_rows() - i - 1;
      cur.shape.middleRows(i, tail) = cur.shape.bottomRows(tail).eval();
      cur.offset.segment(i, tail) = cur.offset.tail(tail).eval();
      cur.shape.conservativeResize(cur.num_rows() - 1, Eigen::NoChange);
      cur.offset.conservativeResize(cur.offset.size() - 1);
    } else {
      ++i;
    }
  }
  return cur;
}

Polyhedron Project2d(const Polyhedron& poly,
                     std::pair<Eigen::Index, Eigen::Index> dims) {
  poly.Validate();
  const Eigen::Index n = poly.dim();
  if (dims.first < 0 || dims.second < 0 || dims.first >= n ||
      dims.second >= n || dims.first == dims.second) {
    throw DimensionMismatch("Project2d: coordinate indices out of range");
  }
  if (n > kMaxProjectionDim) {
    throw TooHighDimensional("Project2d: dimension exceeds " +
                             std::to_string(kMaxProjectionDim));
  }
  if (!IsBounded(poly)) throw Unbounded("Project2d: polyhedron is unbounded");

  // Move the kept coordinates to the front, then eliminate from the back.
  std::vector<Eigen::Index> order = {dims.first, dims.second};
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != dims.first && j != dims.second) order.push_back(j);
  }
  Polyhedron cur;
  cur.shape.resize(poly.num_rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) cur.shape.col(j) = poly.shape.col(order[j]);
  cur.offset = poly.offset;
  cur = RemoveRedundantRows(Normalize(cur));
  while (cur.dim() > 2) {
    cur = RemoveRedundantRows(Normalize(Eliminate(cur, cur.dim() - 1)));
  }
  return cur;
}

std::vector<Vector> PolygonCcw(const Polyhedron& poly) {
  if (poly.dim() != 2) throw DimensionMismatch("PolygonCcw: needs a 2-D set");
  std::vector<Vector> v = Vertices(poly);
  if (v.empty()) return v;
  Vector c = Vector::Zero(2);
  for (const Vector& p : v) c += p;
  c /= static_cast<double>(v.size());
  std::sort(v.begin(), v.end(), [&c](const Vector& a, const Vector& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) <
           std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  return v;
}

void WritePolygonCsv(std::ostream& os, const std::vector<Vector>& vertices) {
  os << "x,y\n";
  char buf[64];
  for (const Vector& v : vertices) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", v[0], v[1]);
    os << buf;
  }
}

}  // namespace rpitrack::polyhedra
