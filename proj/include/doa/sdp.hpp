#pragma once

// Solver bridge: serializes an LmiProblem to the SDPA sparse interchange
// format, delegates solving to a pluggable external conic-solver adapter,
// and recovers/validates Lyapunov certificates from solutions.

#include "doa/certificate.hpp"
#include "doa/lmi.hpp"
#include "doa/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace doa {

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

std::string to_string(SolveStatus s);

struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<double> x;       // scalar variables in canonical layout order
  double objective = 0.0;      // maximization value when the problem has one
  int iterations = -1;
  double residual = 0.0;
  std::string solver_message;  // adapter diagnostics
};

// Writes the problem as an SDPA sparse ".dat-s" file (minimization form;
// strict blocks are shifted by eps). Deterministic ordering => identical
// problems produce byte-identical files. Format details: docs/file-formats.md.
void export_sdpa(const LmiProblem& p, const std::string& path);

// Sidecar table mapping scalar variable indices (as used in the .dat-s file)
// back to matrix entries; written next to exports for desk verification.
void write_variable_index(const LmiProblem& p, const std::string& path);

// Runs the external adapter (default: tools/solve_sdpa.py, overridable via
// the DOA_SOLVER_ADAPTER environment variable or the argument) on the
// exported problem and parses the result. Infeasibility and numerical
// failure are reported in the status, not thrown.
SdpSolution solve(const LmiProblem& p, const std::string& adapter_path = "");

// Q_i -> P_i = Q_i^{-1} (by symmetric eigendecomposition, re-symmetrized),
// H_{i,t} = Y_{i,t} P_i. For direct-shape ('P') problems the matrix variables
// are taken as P_i directly. Throws std::runtime_error if the solution is not
// optimal or a matrix is numerically singular (min eigenvalue < 1e-10).
Certificate recover_certificate(const LmiProblem& p, const SdpSolution& sol);

struct BlockMargin {
  std::string tag;
  double min_eigenvalue = 0.0;
  double requirement = 0.0;  // eps for strict blocks, 0 for psd blocks
  double margin() const { return min_eigenvalue - requirement; }
};

struct ValidationReport {
  std::vector<BlockMargin> blocks;   // one entry per reassembled block
  double worst_within = 0.0;         // min margin over within-mode blocks
  double worst_switching = 0.0;      // min margin over switching blocks
  double worst_band = 0.0;           // min over rows of 1 - h P^{-1} h'
  bool passed = false;
  std::string summary() const;
};

// Re-assembles the certificate conditions at the recovered values and checks
// every block: strict blocks need min eigenvalue >= eps - 1e-6, psd blocks
// >= -1e-8, and every gain-band row h = H_{i,t}^{j.} needs
// h P_i^{-1} h' <= 1 + 1e-8.
ValidationReport validate_certificate(const SwitchedSystem& sys,
                                      const Certificate& cert, double eps);

}  // namespace doa
