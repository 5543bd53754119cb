#include "doa/sdp.hpp"

#include "doa/io.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace doa {

namespace fs = std::filesystem;

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shift making block(x) >= shift*I the cone condition X = block(x) - shift*I >= 0.
double block_shift(const LmiProblem& p, const BlockConstraint& b) {
  return b.kind == BlockKind::StrictPd ? p.eps : 0.0;
}

}  // namespace

void export_sdpa(const LmiProblem& p, const std::string& path) {
  std::ostringstream out;
  out << "\"block-diagonal semidefinite program, canonical variable/block order\n";
  const int M = p.layout.count();
  out << M << "\n";
  out << p.blocks.size() << "\n";
  for (std::size_t k = 0; k < p.blocks.size(); ++k)
    out << p.blocks[k].size << (k + 1 < p.blocks.size() ? " " : "\n");
  if (p.blocks.empty()) out << "\n";
  // Objective of the minimization form: we maximize, the file minimizes.
  for (int v = 0; v < M; ++v) {
    const double c =
        p.objective.empty() ? 0.0 : -p.objective[static_cast<std::size_t>(v)];
    out << fmt(c) << (v + 1 < M ? " " : "\n");
  }
  if (M == 0) out << "\n";
  // Constant matrices F_0 = shift*I - constant, then one matrix per variable.
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const BlockConstraint& b = p.blocks[k];
    const double shift = block_shift(p, b);
    for (int r = 0; r < b.size; ++r)
      for (int c = r; c < b.size; ++c) {
        const double v = (r == c ? shift : 0.0) - b.constant(r, c);
        if (v != 0.0)
          out << "0 " << k + 1 << " " << r + 1 << " " << c + 1 << " " << fmt(v)
              << "\n";
      }
  }
  for (int v = 0; v < M; ++v)
    for (std::size_t k = 0; k < p.blocks.size(); ++k) {
      const BlockConstraint& b = p.blocks[k];
      auto it = b.coeff.find(v);
      if (it == b.coeff.end()) continue;
      for (int r = 0; r < b.size; ++r)
        for (int c = r; c < b.size; ++c) {
          const double val = it->second(r, c);
          if (val != 0.0)
            out << v + 1 << " " << k + 1 << " " << r + 1 << " " << c + 1 << " "
                << fmt(val) << "\n";
        }
    }
  atomic_write_text(path, out.str());
}

void write_variable_index(const LmiProblem& p, const std::string& path) {
  std::ostringstream out;
  out << "# scalar variable index map: index kind mode level row col (1-based)\n"
      << "# kind " << p.variable_symbol
      << ": upper-triangle entry of the symmetric matrix variable\n"
      << "# kind Y: entry of the gain variable for the given level\n";
  for (int v = 0; v < p.layout.count(); ++v) {
    const auto e = p.layout.describe(v);
    out << v + 1 << " " << (e.kind == 'Q' ? p.variable_symbol : 'Y') << " "
        << e.mode + 1 << " ";
    if (e.level < 0)
      out << "-";
    else
      out << e.level + 1;
    out << " " << e.row + 1 << " " << e.col + 1 << "\n";
  }
  atomic_write_text(path, out.str());
}

SdpSolution solve(const LmiProblem& p, const std::string& adapter_path) {
  std::string adapter = adapter_path;
  if (adapter.empty()) {
    const char* env = std::getenv("DOA_SOLVER_ADAPTER");
    if (env != nullptr && *env != '\0')
      adapter = env;
    else
      adapter = DOA_DEFAULT_ADAPTER;
  }

  SdpSolution sol;
  if (!fs::exists(adapter)) {
    sol.solver_message = "solver adapter not found: " + adapter;
    return sol;
  }

  char tmpl[] = "/tmp/doa-sdp-XXXXXX";
  char* dir = ::mkdtemp(tmpl);
  if (dir == nullptr) {
    sol.solver_message = "could not create temporary directory";
    return sol;
  }
  const fs::path work(dir);
  const std::string problem = (work / "problem.dat-s").string();
  const std::string answer = (work / "solution.txt").string();
  const std::string errlog = (work / "stderr.txt").string();

  export_sdpa(p, problem);
  const std::string cmd = "python3 \"" + adapter + "\" \"" + problem + "\" \"" +
                          answer + "\" 2> \"" + errlog + "\"";
  const int rc = std::system(cmd.c_str());
  const bool clean_exit = WIFEXITED(rc) && WEXITSTATUS(rc) == 0;

  if (!clean_exit || !fs::exists(answer)) {
    std::error_code ec;
    sol.solver_message = "adapter failed";
    if (fs::exists(errlog)) {
      const std::string err = read_text(errlog);
      if (!err.empty()) sol.solver_message += ": " + err;
    }
    fs::remove_all(work, ec);
    return sol;
  }

  std::istringstream in(read_text(answer));
  std::string key;
  std::string status_word = "numerical_failure";
  double min_objective = 0.0;
  while (in >> key) {
    if (key == "status") {
      in >> status_word;
    } else if (key == "objective") {
      in >> min_objective;
    } else if (key == "iterations") {
      in >> sol.iterations;
    } else if (key == "residual") {
      in >> sol.residual;
    } else if (key == "x") {
      sol.x.assign(static_cast<std::size_t>(p.layout.count()), 0.0);
      for (double& v : sol.x) in >> v;
    } else {
      std::string rest;
      std::getline(in, rest);
    }
  }
  std::error_code ec;
  fs::remove_all(work, ec);

  if (status_word == "optimal")
    sol.status = SolveStatus::Optimal;
  else if (status_word == "infeasible")
    sol.status = SolveStatus::Infeasible;
  else
    sol.status = SolveStatus::NumericalFailure;
  if (sol.status != SolveStatus::Optimal) sol.x.clear();
  // The file carries the minimization objective; report the maximization one.
  sol.objective = p.objective.empty() ? 0.0 : -min_objective;
  sol.solver_message = "adapter status: " + status_word;
  return sol;
}

namespace {

Matrix extract_symmetric(const LmiProblem& p, const std::vector<double>& x,
                         int mode) {
  const int n = p.layout.n;
  Matrix Q(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const double v = x.at(static_cast<std::size_t>(p.layout.q_index(mode, r, c)));
      Q(r, c) = v;
      Q(c, r) = v;
    }
  return Q;
}

Matrix extract_gain(const LmiProblem& p, const std::vector<double>& x, int mode,
                    int level) {
  Matrix Y(p.layout.m, p.layout.n);
  for (int r = 0; r < p.layout.m; ++r)
    for (int c = 0; c < p.layout.n; ++c)
      Y(r, c) =
          x.at(static_cast<std::size_t>(p.layout.y_index(mode, level, r, c)));
  return Y;
}

// Symmetric positive-definite inverse via eigendecomposition, re-symmetrized.
Matrix spd_inverse(const Matrix& Q, double min_eig_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  if (es.eigenvalues().minCoeff() < min_eig_tol)
    throw std::runtime_error("matrix numerically singular (min eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()) + ")");
  Matrix P = es.eigenvectors() *
             es.eigenvalues().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
  return 0.5 * (P + P.transpose());
}

}  // namespace

Certificate recover_certificate(const LmiProblem& p, const SdpSolution& sol) {
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("recover_certificate: solution is not optimal");
  if (static_cast<int>(sol.x.size()) != p.layout.count())
    throw std::runtime_error("recover_certificate: variable count mismatch");
  Certificate cert;
  cert.tau = p.layout.levels;
  cert.objective = sol.objective;
  for (int i = 0; i < p.layout.modes; ++i) {
    const Matrix Qi = extract_symmetric(p, sol.x, i);
    if (p.variable_symbol == 'P') {
      cert.P.push_back(0.5 * (Qi + Qi.transpose()));
      cert.H.emplace_back();
    } else {
      const Matrix Pi = spd_inverse(Qi, 1e-10);
      cert.P.push_back(Pi);
      std::vector<Matrix> Hi;
      for (int t = 0; t < p.layout.levels; ++t)
        Hi.push_back(extract_gain(p, sol.x, i, t) * Pi);
      cert.H.push_back(std::move(Hi));
    }
  }
  return cert;
}

ValidationReport validate_certificate(const SwitchedSystem& sys,
                                      const Certificate& cert, double eps) {
  if (cert.tau < 1)
    throw std::invalid_argument("validate_certificate: certificate has no dwell window");
  const LmiProblem p = build_saturated_dwell(sys, cert.tau, eps);

  // Substitute Q_i = P_i^{-1}, Y_{i,t} = H_{i,t} Q_i.
  std::vector<double> x(static_cast<std::size_t>(p.layout.count()), 0.0);
  std::vector<Matrix> Qs;
  for (int i = 0; i < p.layout.modes; ++i) {
    const Matrix Qi = spd_inverse(cert.P[static_cast<std::size_t>(i)], 1e-14);
    Qs.push_back(Qi);
    for (int r = 0; r < p.layout.n; ++r)
      for (int c = r; c < p.layout.n; ++c)
        x[static_cast<std::size_t>(p.layout.q_index(i, r, c))] = Qi(r, c);
    for (int t = 0; t < p.layout.levels; ++t) {
      const Matrix Y = cert.H.at(static_cast<std::size_t>(i))
                           .at(static_cast<std::size_t>(t)) *
                       Qi;
      for (int r = 0; r < p.layout.m; ++r)
        for (int c = 0; c < p.layout.n; ++c)
          x[static_cast<std::size_t>(p.layout.y_index(i, t, r, c))] = Y(r, c);
    }
  }

  ValidationReport rep;
  rep.worst_within = rep.worst_switching = rep.worst_band = 1e300;
  bool ok = true;
  for (const auto& b : p.blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(evaluate_block(b, x));
    BlockMargin bm;
    bm.tag = b.tag;
    bm.min_eigenvalue = es.eigenvalues().minCoeff();
    bm.requirement = block_shift(p, b);
    rep.blocks.push_back(bm);
    const double tol = b.kind == BlockKind::StrictPd ? -1e-6 : -1e-8;
    if (bm.margin() < tol) ok = false;
    if (b.tag.rfind("within-mode", 0) == 0)
      rep.worst_within = std::min(rep.worst_within, bm.margin());
    else if (b.tag.rfind("switch", 0) == 0)
      rep.worst_switching = std::min(rep.worst_switching, bm.margin());
  }
  // Direct gain-band containment per row: h P^{-1} h' <= 1.
  for (int i = 0; i < p.layout.modes; ++i)
    for (int t = 0; t < p.layout.levels; ++t) {
      const Matrix& H = cert.H[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(t)];
      for (int j = 0; j < p.layout.m; ++j) {
        const Vector h = H.row(j).transpose();
        const double margin = 1.0 - h.dot(Qs[static_cast<std::size_t>(i)] * h);
        rep.worst_band = std::min(rep.worst_band, margin);
        if (margin < -1e-8) ok = false;
      }
    }
  rep.passed = ok;
  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << "certificate validation: " << (passed ? "PASSED" : "FAILED") << "\n"
      << "  worst within-mode margin:  " << worst_within << "\n"
      << "  worst switching margin:    " << worst_switching << "\n"
      << "  worst gain-band margin:    " << worst_band << "\n"
      << "  blocks checked:            " << blocks.size() << "\n";
  for (const auto& b : blocks)
    if (b.margin() < (b.requirement > 0 ? -1e-6 : -1e-8))
      out << "  VIOLATION " << b.tag << ": min eigenvalue " << b.min_eigenvalue
          << " (requirement " << b.requirement << ")\n";
  return out.str();
}

}  // namespace doa
