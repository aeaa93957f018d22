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

#include "rpitrack/cli/commands.h"

#include <chrono>
#include <filesystem>
#include <sstream>
#include <vector>

#include "rpitrack/certify/serialize.h"
#include "rpitrack/cli/manifest.h"
#include "rpitrack/cli/problem.h"
#include "rpitrack/errors.h"
#include "rpitrack/polyhedra/projection.h"
#include "rpitrack/sim/simulate.h"

namespace rpitrack::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kMonitorTol = 1e-6;
constexpr size_t kViolationDetails = 1000;

// Collects the manifest as a command runs and writes it on every exit path.
class Run {
 public:
  Run(std::string command, const GlobalFlags& flags, std::ostream& err)
      : flags_(flags), err_(err), start_(std::chrono::steady_clock::now()) {
    m_.command = std::move(command);
  }

  RunManifest& manifest() { return m_; }

  std::string OutPath(const std::string& name) const {
    return (fs::path(flags_.out_dir) / name).string();
  }

  void Input(const std::string& path) { m_.inputs.push_back(path); }

  int Finish(int code, const std::string& summary) {
    m_.exit_code = code;
    m_.passed = code == kExitOk;
    m_.summary = summary;
    m_.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    try {
      m_.input_digest = DigestFiles(m_.inputs);
    } catch (const Error&) {
      m_.input_digest = "";
    }
    try {
      fs::create_directories(flags_.out_dir);
      WriteFileAtomic(OutPath(m_.command + ".manifest.json"), ManifestJson(m_));
    } catch (const std::exception& e) {
      err_ << "warning: manifest not written: " << e.what() << "\n";
    }
    return code;
  }

  int Fail(int code, const std::string& message) {
    err_ << "error: " << message << "\n";
    return Finish(code, message);
  }

 private:
  RunManifest m_;
  const GlobalFlags& flags_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
};

void RequireCompatible(const certify::Certificate& cert, const ProblemFile& pf) {
  const Eigen::Index n = pf.problem.plant.n();
  const Eigen::Index m = pf.problem.plant.m();
  if (cert.inv.n_cl() != n + 2) {
    throw ParseError(0, "certificate has " + std::to_string(cert.inv.n_cl()) +
                            " closed-loop states, the problem needs " + std::to_string(n + 2));
  }
  if (cert.gains.k.size() != m) {
    throw ParseError(0, "certificate gains have " + std::to_string(cert.gains.k.size()) +
                            " inputs, the problem has " + std::to_string(m));
  }
  if (cert.l_x() != pf.problem.xc.x_mat.rows() || cert.q.rows() != pf.problem.uc.u_mat.rows()) {
    throw ParseError(0, "certificate constraint blocks do not match the problem");
  }
}

std::string Describe(const certify::Certificate& cert) {
  std::ostringstream os;
  os << "rho=" << certify::FormatNumber(cert.rho[0]) << "," << certify::FormatNumber(cert.rho[1])
     << " gamma=" << certify::FormatNumber(cert.gamma);
  return os.str();
}

}  // namespace

int CmdSynthesize(const std::string& problem_path, const GlobalFlags& flags,
                  const SynthesizeOverrides& overrides, std::ostream& out,
                  std::ostream& err) {
  Run run("synthesize", flags, err);
  run.Input(problem_path);
  try {
    ProblemFile pf = ParseProblemFile(problem_path);
    synth::SynthesisOptions& o = pf.synthesis;
    if (flags.seed) o.rng_seed = *flags.seed;
    if (flags.tol) o.check_tol = *flags.tol;
    if (overrides.restarts) o.restarts = *overrides.restarts;
    if (overrides.threads) o.threads = *overrides.threads;
    if (overrides.max_outer_iters) o.max_outer_iters = *overrides.max_outer_iters;
    run.manifest().seed = o.rng_seed;
    o.Validate(pf.problem.plant.n() + 2);

    std::string log_text;
    synth::SynthesisResult result;
    try {
      result = synth::Synthesize(pf.problem, o,
                                 [&](const std::string& line) { log_text += line + "\n"; });
    } catch (...) {
      fs::create_directories(flags.out_dir);
      WriteFileAtomic(run.OutPath("synthesis.log"), log_text);
      run.manifest().outputs.push_back(run.OutPath("synthesis.log"));
      throw;
    }
    std::ostringstream cert_text;
    certify::WriteCertificate(cert_text, result.cert);
    fs::create_directories(flags.out_dir);
    WriteFileAtomic(run.OutPath("certificate.txt"), cert_text.str());
    WriteFileAtomic(run.OutPath("synthesis.log"), log_text);
    run.manifest().outputs = {run.OutPath("certificate.txt"), run.OutPath("synthesis.log")};
    const std::string summary = std::string("certified objective=") +
                                certify::FormatNumber(result.objective_value) + " " +
                                Describe(result.cert) +
                                " restart=" + std::to_string(result.restart_index);
    out << summary << "\n";
    return run.Finish(kExitOk, summary);
  } catch (const ParseError& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const InvalidOptions& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const InvalidModel& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const NoFeasiblePoint& e) {
    return run.Fail(kExitNoFeasiblePoint, e.what());
  } catch (const std::exception& e) {
    return run.Fail(kExitNumerical, e.what());
  }
}

int CmdCertify(const std::string& certificate_path, const std::string& problem_path,
               const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  Run run("certify", flags, err);
  run.Input(certificate_path);
  run.Input(problem_path);
  try {
    const ProblemFile pf = ParseProblemFile(problem_path);
    const certify::Certificate cert = certify::ReadCertificateFile(certificate_path);
    RequireCompatible(cert, pf);
    const certify::CertReport report = certify::CheckCertificate(
        cert, pf.problem.plant, pf.problem.xc, pf.problem.uc, pf.problem.ref,
        flags.tol.value_or(certify::kEqualityTol));
    report.WriteTable(out);
    return run.Finish(report.passed ? kExitOk : kExitFailed,
                      report.passed ? "certificate passed" : "certificate failed");
  } catch (const ParseError& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const DimensionMismatch& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const std::exception& e) {
    return run.Fail(kExitNumerical, e.what());
  }
}

int CmdSimulate(const std::string& problem_path, const std::string& certificate_path,
                const std::string& signal_spec, const std::string& out_csv,
                const GlobalFlags& flags, std::ostream& out, std::ostream& err) {
  Run run("simulate", flags, err);
  run.Input(problem_path);
  run.Input(certificate_path);
  try {
    const ProblemFile pf = ParseProblemFile(problem_path);
    const certify::Certificate cert = certify::ReadCertificateFile(certificate_path);
    RequireCompatible(cert, pf);
    const SimulationSpec& spec = pf.simulation;
    const sim::ReferenceSignal signal =
        signal_spec.empty() ? spec.signal : ParseSignalSpec(signal_spec);

    const bool admissible = sim::ReferenceAdmissible(signal, cert.rho, spec.horizon, 1e-12);
    if (!admissible) {
      const auto [lo, hi] = sim::ReferenceRange(signal, spec.horizon);
      std::ostringstream msg;
      msg << "reference range [" << certify::FormatNumber(lo) << ", "
          << certify::FormatNumber(hi) << "] is outside the certified set "
          << "[-" << certify::FormatNumber(cert.rho[1]) << ", "
          << certify::FormatNumber(cert.rho[0]) << "]";
      if (flags.strict) return run.Fail(kExitInadmissible, msg.str());
      err << "warning: " << msg.str() << "\n";
    }

    const model::ClosedLoop cl =
        model::BuildClosedLoop(pf.problem.plant, cert.gains, pf.problem.ref);
    sim::ConstraintMonitor monitor(pf.problem.plant, pf.problem.xc, pf.problem.uc,
                                   cert.inv.AsPolyhedron(), flags.tol.value_or(kMonitorTol));
    monitor.set_limit(kViolationDetails);
    sim::SimOptions so;
    so.decimation = spec.decimation;
    so.observer = monitor.AsObserver();
    const sim::Trajectory traj =
        sim::Simulate(cl, cert.gains, pf.problem.plant, signal, Vector::Zero(cl.n_cl()),
                      spec.horizon, spec.dt, so);

    fs::create_directories(flags.out_dir);
    const std::string csv_path = out_csv.empty() ? run.OutPath("trajectory.csv") : out_csv;
    std::ostringstream csv;
    sim::WriteTrajectoryCsv(csv, traj, pf.problem.plant.n());
    WriteFileAtomic(csv_path, csv.str());
    std::ostringstream report;
    report << "kind,t,row,margin\n";
    for (const sim::Violation& v : monitor.violations()) {
      report << sim::ToString(v.kind) << "," << certify::FormatNumber(v.t) << "," << v.row << ","
             << certify::FormatNumber(v.margin) << "\n";
    }
    WriteFileAtomic(run.OutPath("violations.csv"), report.str());
    run.manifest().outputs = {csv_path, run.OutPath("violations.csv")};

    std::ostringstream summary;
    summary << "samples=" << traj.size() << " violations=" << monitor.count()
            << " reference_admissible=" << (admissible ? "true" : "false");
    out << summary.str() << "\n";
    return run.Finish(monitor.count() == 0 ? kExitOk : kExitFailed, summary.str());
  } catch (const ParseError& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const DimensionMismatch& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const std::exception& e) {
    return run.Fail(kExitNumerical, e.what());
  }
}

int CmdProject(const std::string& certificate_path, std::pair<int, int> dims,
               const std::string& out_csv, const GlobalFlags& flags, std::ostream& out,
               std::ostream& err) {
  Run run("project", flags, err);
  run.Input(certificate_path);
  try {
    const certify::Certificate cert = certify::ReadCertificateFile(certificate_path);
    const int n_cl = static_cast<int>(cert.inv.n_cl());
    if (dims.first < 0 || dims.second < 0 || dims.first >= n_cl || dims.second >= n_cl ||
        dims.first == dims.second) {
      return run.Fail(kExitParse, "dims must be two distinct indices in [0, " +
                                      std::to_string(n_cl) + ")");
    }
    const polyhedra::Polyhedron proj =
        polyhedra::Project2d(cert.inv.AsPolyhedron(), {dims.first, dims.second});
    const std::vector<Vector> vertices = polyhedra::PolygonCcw(proj);
    fs::create_directories(flags.out_dir);
    const std::string csv_path = out_csv.empty() ? run.OutPath("projection.csv") : out_csv;
    std::ostringstream csv;
    polyhedra::WritePolygonCsv(csv, vertices);
    WriteFileAtomic(csv_path, csv.str());
    run.manifest().outputs = {csv_path};
    const std::string summary = "vertices=" + std::to_string(vertices.size());
    out << summary << "\n";
    return run.Finish(kExitOk, summary);
  } catch (const ParseError& e) {
    return run.Fail(kExitParse, e.what());
  } catch (const std::exception& e) {
    return run.Fail(kExitNumerical, e.what());
  }
}

}  // namespace rpitrack::cli
