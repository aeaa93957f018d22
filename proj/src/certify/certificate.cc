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

#include "rpitrack/certify/certificate.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "rpitrack/errors.h"
#include "rpitrack/numlin/linalg.h"
#include "rpitrack/numlin/stability.h"

namespace rpitrack::certify {

using numlin::MaxAbs;
using numlin::RequireShape;

polyhedra::Polyhedron InvariantSet::AsPolyhedron() const {
  return polyhedra::Polyhedron{l_cl, Vector::Ones(l_cl.rows())};
}

void InvariantSet::Validate() const {
  numlin::RequireFinite(l_cl, "InvariantSet");
  if (l_cl.cols() < 1 || l_cl.rows() <= l_cl.cols()) {
    throw DimensionMismatch("InvariantSet: need more rows than columns");
  }
  if (numlin::NumericalRank(l_cl, numlin::kDefaultRankTol) != l_cl.cols()) {
    throw RankDeficient("InvariantSet: l_cl lacks full column rank");
  }
  if (!polyhedra::IsBounded(AsPolyhedron())) {
    throw Unbounded("InvariantSet: set is unbounded");
  }
}

const std::vector<std::string>& ResidualNames() {
  static const std::vector<std::string> names = {
      "rpi_x",          "rpi_xi1",          "rpi_xi2",          "rpi_ref",
      "rpi_decay",      "rank_identity",    "state_map",        "state_offset_x",
      "state_offset_xi1", "state_offset_xi2", "input_map_x",    "input_map_xi1",
      "input_map_xi2",  "input_map_ref",    "input_offset",     "h_metzler",
      "h_r_nonneg",     "t_nonneg",         "q_nonneg",         "q_r_nonneg",
      "xi_nonneg",    "rho_nonneg",       "gamma_positive",   "hurwitz"};
  return names;
}

const Residual& CertReport::Find(const std::string& name) const {
  for (const Residual& r : residuals) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("CertReport: no residual named " + name);
}

void CertReport::WriteTable(std::ostream& os) const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-18s %-14s %-14s %s\n", "residual", "value",
                "tolerance", "status");
  os << buf;
  for (const Residual& r : residuals) {
    std::snprintf(buf, sizeof(buf), "%-18s %-14.6e %-14.6e %s\n", r.name.c_str(),
                  r.value, r.tolerance, r.passed() ? "ok" : "FAIL");
    os << buf;
  }
  os << (passed ? "PASS" : "FAIL") << "\n";
}

void CertReport::WriteKeyValue(std::ostream& os) const {
  char buf[64];
  for (const Residual& r : residuals) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    os << r.name << " = " << buf << "\n";
  }
  os << "passed = " << (passed ? "true" : "false") << "\n";
}

double StabilityMargin(const Matrix& a) {
  double lo = -(1.0 + a.cwiseAbs().rowwise().sum().maxCoeff());
  double hi = -lo;
  if (!numlin::IsHurwitz(a, lo)) return lo;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (numlin::IsHurwitz(a, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

namespace {

double PositivePart(double v) { return std::max(0.0, v); }

double MaxPositive(const Vector& v) {
  return v.size() == 0 ? 0.0 : PositivePart(v.maxCoeff());
}

double NegativeMagnitude(const Matrix& m) {
  return m.size() == 0 ? 0.0 : PositivePart(-m.minCoeff());
}

void CheckShapes(const Certificate& cert, const model::PlantModel& plant,
                 const model::StateConstraint& xc,
                 const model::InputConstraint& uc) {
  const Eigen::Index n = plant.n();
  const Eigen::Index m = plant.m();
  const Eigen::Index n_cl = n + 2;
  const Eigen::Index l = cert.l();
  const Eigen::Index l_x = xc.x_mat.rows();
  const Eigen::Index l_u = uc.u_mat.rows();
  RequireShape(xc.x_mat, l_x, n, "Certificate: X");
  RequireShape(uc.u_mat, l_u, m, "Certificate: U");
  if (l < 1) throw DimensionMismatch("Certificate: empty l_cl");
  RequireShape(cert.inv.l_cl, l, n_cl, "Certificate: l_cl");
  RequireShape(cert.h, l, l, "Certificate: h");
  RequireShape(cert.h_r, l, 2, "Certificate: h_r");
  RequireShape(cert.t, l_x + 4, l, "Certificate: t");
  RequireShape(cert.q, l_u, l, "Certificate: q");
  RequireShape(cert.q_r, l_u, 2, "Certificate: q_r");
  RequireShape(cert.v, n_cl, l, "Certificate: v");
  RequireShape(cert.rho, 2, 1, "Certificate: rho");
  try {
    cert.gains.Validate(m);
  } catch (const Error& e) {
    throw DimensionMismatch(std::string("Certificate: ") + e.what());
  }
  for (const Matrix* mat : {&cert.inv.l_cl, &cert.h, &cert.h_r, &cert.t, &cert.q,
                            &cert.q_r, &cert.v}) {
    numlin::RequireFinite(*mat, "Certificate");
  }
  numlin::RequireFinite(cert.rho, "Certificate: rho");
  Vector scalars(5);
  scalars << cert.gamma, cert.xi.x_i11, cert.xi.x_i21, cert.xi.x_i12, cert.xi.x_i22;
  numlin::RequireFinite(scalars, "Certificate: scalars");
}

}  // namespace

CertReport CheckCertificate(const Certificate& cert, const model::PlantModel& plant,
                            const model::StateConstraint& xc,
                            const model::InputConstraint& uc,
                            const model::ReferenceClass& ref, double tol) {
  CheckShapes(cert, plant, xc, uc);
  const Eigen::Index n = plant.n();
  const Eigen::Index n_cl = n + 2;
  const Eigen::Index l = cert.l();
  const Eigen::Index l_x = xc.x_mat.rows();
  const Matrix& lc = cert.inv.l_cl;

  model::ReferenceClass loop_ref = ref;
  loop_ref.rho = cert.rho;
  const model::ClosedLoop cl = model::BuildClosedLoop(plant, cert.gains, loop_ref);

  CertReport report;
  auto add = [&](const std::string& name, double value, double tolerance) {
    report.residuals.push_back({name, value, tolerance});
  };

  // Invariance: H L_cl - L_cl A_cl split by column block, H_r R - L_cl B_cl.
  const Matrix rpi = cert.h * lc - lc * cl.a_cl;
  add("rpi_x", MaxAbs(rpi.leftCols(n)), tol);
  add("rpi_xi1", MaxAbs(rpi.col(n)), tol);
  add("rpi_xi2", MaxAbs(rpi.col(n + 1)), tol);
  const Matrix r_mat = model::ReferenceClass::RMat();
  add("rpi_ref", MaxAbs(cert.h_r * r_mat - lc * cl.b_cl), tol);
  const Vector decay = cert.h.rowwise().sum() + cert.h_r * cert.rho +
                       Vector::Constant(l, cert.gamma);
  add("rpi_decay", MaxPositive(decay), tol);

  add("rank_identity", MaxAbs(cert.v * lc - Matrix::Identity(n_cl, n_cl)), tol);

  // State inclusion against X_cl = blockdiag(X, X_I1, X_I2).
  Matrix x_cl = Matrix::Zero(l_x + 4, n_cl);
  x_cl.topLeftCorner(l_x, n) = xc.x_mat;
  x_cl.bottomRightCorner(4, 2) = cert.xi.AsMatrix();
  add("state_map", MaxAbs(cert.t * lc - x_cl), tol);
  const Vector t_rows = cert.t.rowwise().sum();
  add("state_offset_x", MaxPositive(t_rows.head(l_x) - Vector::Ones(l_x)), tol);
  add("state_offset_xi1", MaxPositive(t_rows.segment(l_x, 2) - Vector::Ones(2)), tol);
  add("state_offset_xi2", MaxPositive(t_rows.tail(2) - Vector::Ones(2)), tol);

  // Input inclusion.
  const Matrix u_map = uc.u_mat * model::InputConstraintMap(cert.gains, plant);
  const Matrix qi = cert.q * lc - u_map.leftCols(n_cl);
  add("input_map_x", MaxAbs(qi.leftCols(n)), tol);
  add("input_map_xi1", MaxAbs(qi.col(n)), tol);
  add("input_map_xi2", MaxAbs(qi.col(n + 1)), tol);
  add("input_map_ref", MaxAbs(cert.q_r * r_mat - u_map.col(n_cl)), tol);
  const Vector q_rows = cert.q.rowwise().sum() + cert.q_r * cert.rho;
  add("input_offset", MaxPositive(q_rows - Vector::Ones(q_rows.size())), tol);

  // Sign conditions.
  Matrix off = cert.h;
  off.diagonal().setZero();
  add("h_metzler", NegativeMagnitude(off), tol);
  add("h_r_nonneg", NegativeMagnitude(cert.h_r), tol);
  add("t_nonneg", NegativeMagnitude(cert.t), tol);
  add("q_nonneg", NegativeMagnitude(cert.q), tol);
  add("q_r_nonneg", NegativeMagnitude(cert.q_r), tol);
  Vector xi_entries(4);
  xi_entries << cert.xi.x_i11, cert.xi.x_i21, cert.xi.x_i12, cert.xi.x_i22;
  add("xi_nonneg", NegativeMagnitude(xi_entries), tol);
  add("rho_nonneg", NegativeMagnitude(cert.rho), tol);
  add("gamma_positive", PositivePart(kGammaMin - cert.gamma), 0.0);

  const bool stable = numlin::IsHurwitz(cl.a_cl, kHurwitzMargin);
  add("hurwitz",
      stable ? 0.0 : std::max(1e-300, kHurwitzMargin - StabilityMargin(cl.a_cl)),
      0.0);

  report.passed = std::all_of(report.residuals.begin(), report.residuals.end(),
                              [](const Residual& r) { return r.passed(); });
  return report;
}

}  // namespace rpitrack::certify
