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

#include "rpitrack/certify/serialize.h"

#include "rpitrack/errors.h"

namespace rpitrack::certify {

void WriteCertificate(std::ostream& os, const Certificate& cert) {
  const Eigen::Index m = cert.gains.k.size();
  os << "# rpitrack certificate\n";
  os << "[certificate]\n";
  os << "format = " << kCertificateFormat << "\n";
  os << "n_cl = " << cert.inv.n_cl() << "\n";
  os << "m = " << m << "\n";
  os << "l = " << cert.l() << "\n";
  os << "l_x = " << cert.l_x() << "\n";
  os << "l_u = " << cert.q.rows() << "\n";
  WriteScalar(os, "gamma", cert.gamma);
  WriteMatrix(os, "rho", cert.rho.transpose());
  os << "\n[gains]\n";
  WriteMatrix(os, "k", cert.gains.k.transpose());
  WriteMatrix(os, "k_i1", cert.gains.k_i1.transpose());
  WriteMatrix(os, "k_i2", cert.gains.k_i2.transpose());
  WriteMatrix(os, "k_r", cert.gains.k_r.transpose());
  os << "\n[integral_bounds]\n";
  WriteScalar(os, "x_i11", cert.xi.x_i11);
  WriteScalar(os, "x_i21", cert.xi.x_i21);
  WriteScalar(os, "x_i12", cert.xi.x_i12);
  WriteScalar(os, "x_i22", cert.xi.x_i22);
  os << "\n[matrices]\n";
  WriteMatrix(os, "l_cl", cert.inv.l_cl);
  WriteMatrix(os, "h", cert.h);
  WriteMatrix(os, "h_r", cert.h_r);
  WriteMatrix(os, "t", cert.t);
  WriteMatrix(os, "q", cert.q);
  WriteMatrix(os, "q_r", cert.q_r);
  WriteMatrix(os, "v", cert.v);
}

namespace {

void Expect(const TextSection& sec, const std::string& key, const Matrix& m,
            Eigen::Index rows, Eigen::Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ParseError(sec.LineOf(key), "'" + key + "' must be " + std::to_string(rows) +
                                          "x" + std::to_string(cols) + ", got " +
                                          std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

Vector GainVec(const TextSection& sec, const std::string& key, Eigen::Index m) {
  const Vector v = sec.Vec(key);
  if (v.size() != m) {
    throw ParseError(sec.LineOf(key), "'" + key + "' must have " + std::to_string(m) +
                                          " entries");
  }
  return v;
}

}  // namespace

Certificate ReadCertificate(const TextDocument& doc) {
  const TextSection& head = doc.Section("certificate");
  head.RejectUnknown({"format", "n_cl", "m", "l", "l_x", "l_u", "gamma", "rho"});
  if (head.Integer("format") != kCertificateFormat) {
    throw ParseError(head.LineOf("format"), "unsupported certificate format");
  }
  const Eigen::Index n_cl = head.Integer("n_cl");
  const Eigen::Index m = head.Integer("m");
  const Eigen::Index l = head.Integer("l");
  const Eigen::Index l_x = head.Integer("l_x");
  const Eigen::Index l_u = head.Integer("l_u");
  for (const char* key : {"n_cl", "m", "l", "l_x", "l_u"}) {
    if (head.Integer(key) < 1) throw ParseError(head.LineOf(key), "dimension must be >= 1");
  }
  if (n_cl < 3) throw ParseError(head.LineOf("n_cl"), "n_cl must be >= 3");

  Certificate cert;
  cert.gamma = head.Number("gamma");
  cert.rho = head.Vec("rho");
  if (cert.rho.size() != 2) throw ParseError(head.LineOf("rho"), "rho needs 2 entries");

  const TextSection& gains = doc.Section("gains");
  gains.RejectUnknown({"k", "k_i1", "k_i2", "k_r"});
  cert.gains.k = GainVec(gains, "k", m);
  cert.gains.k_i1 = GainVec(gains, "k_i1", m);
  cert.gains.k_i2 = GainVec(gains, "k_i2", m);
  cert.gains.k_r = GainVec(gains, "k_r", m);

  const TextSection& xi = doc.Section("integral_bounds");
  xi.RejectUnknown({"x_i11", "x_i21", "x_i12", "x_i22"});
  cert.xi = {xi.Number("x_i11"), xi.Number("x_i21"), xi.Number("x_i12"),
             xi.Number("x_i22")};

  const TextSection& mats = doc.Section("matrices");
  mats.RejectUnknown({"l_cl", "h", "h_r", "t", "q", "q_r", "v"});
  auto read = [&](const std::string& key, Eigen::Index rows, Eigen::Index cols) {
    const Matrix& mat = mats.Mat(key);
    Expect(mats, key, mat, rows, cols);
    return mat;
  };
  cert.inv.l_cl = read("l_cl", l, n_cl);
  cert.h = read("h", l, l);
  cert.h_r = read("h_r", l, 2);
  cert.t = read("t", l_x + 4, l);
  cert.q = read("q", l_u, l);
  cert.q_r = read("q_r", l_u, 2);
  cert.v = read("v", n_cl, l);
  return cert;
}

Certificate ReadCertificate(std::istream& is) {
  return ReadCertificate(TextDocument::Parse(is));
}

Certificate ReadCertificateFile(const std::string& path) {
  return ReadCertificate(TextDocument::ParseFile(path));
}

}  // namespace rpitrack::certify
