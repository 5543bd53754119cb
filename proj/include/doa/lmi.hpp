#pragma once

// Assembly of the certificate conditions as block-structured linear matrix
// inequalities over Q_i = P_i^{-1} and Y_{i,t} = H_{i,t} Q_i. Three builders:
//   - build_saturated_dwell:   dwell-time certificate for the saturated loop
//     (within-mode decrease, tau-step switching decrease over all saturation
//     tuples, and gain-band containment rows);
//   - build_unsaturated_dwell: the same dwell-time test for the loop without
//     saturation (pure feasibility over P_i);
//   - build_contraction_baseline: per-step lambda-contraction conditions with
//     a single auxiliary gain per mode (comparison method).
// All builders use a canonical variable and block order so problem exports
// are byte-stable.

#include "doa/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace doa {

enum class BlockKind {
  StrictPd,  // enforced as >= eps * I
  Psd,       // enforced as >= 0
};

// One symmetric block, affine in the scalar decision variables:
//   block(x) = constant + sum_v x_v * coeff[v].
struct BlockConstraint {
  BlockKind kind = BlockKind::Psd;
  int size = 0;
  Matrix constant;
  std::map<int, Matrix> coeff;  // variable index -> symmetric coefficient
  std::string tag;              // e.g. "within-mode i=1 S={}"
};

// Canonical scalar-variable layout. Per mode: the upper triangle of the
// symmetric matrix variable (row-major, r <= c), then `levels` rectangular
// m x n variables (row-major). levels = tau for the saturated problem, 1 for
// the baseline, 0 for the unsaturated problem.
struct VariableLayout {
  int modes = 0;
  int n = 0;
  int m = 0;
  int levels = 0;

  int tri_count() const { return n * (n + 1) / 2; }
  int per_mode() const { return tri_count() + levels * m * n; }
  int count() const { return modes * per_mode(); }

  int q_index(int mode, int r, int c) const;           // r <= c
  int y_index(int mode, int level, int r, int c) const;

  struct Entry {
    char kind;  // 'Q' (symmetric matrix variable) or 'Y' (gain variable)
    int mode;   // 0-based
    int level;  // 0-based; -1 for Q entries
    int row;
    int col;
  };
  Entry describe(int v) const;
};

struct LmiProblem {
  VariableLayout layout;
  std::vector<BlockConstraint> blocks;
  std::vector<double> objective;  // maximize objective . x; empty = feasibility
  double eps = 1e-6;              // margin replacing strict inequalities
  char variable_symbol = 'Q';     // 'Q' (inverse shape) or 'P' (direct shape)
};

struct FamilyCounts {
  long within = 0;     // one block per (mode, subset)
  long switching = 0;  // one block per ordered mode pair and tau-tuple
  long band = 0;       // one row block per (mode, level, input channel)
  long total = 0;
};

// Closed-form family sizes: N*2^m + N(N-1)*2^{m tau} + N*tau*m.
FamilyCounts count_constraints(int modes, int m, int n, int tau);

LmiProblem build_saturated_dwell(const SwitchedSystem& sys, int tau, double eps);
LmiProblem build_unsaturated_dwell(const SwitchedSystem& sys, int tau, double eps);
// lambda in (0,1): one-step decrease factor. Throws std::invalid_argument
// outside that range.
LmiProblem build_contraction_baseline(const SwitchedSystem& sys, double lambda,
                                      double eps);

// Numeric value of a block at a full variable assignment.
Matrix evaluate_block(const BlockConstraint& b, const std::vector<double>& x);

// Family sizes of an assembled problem, grouped by tag prefix; excludes the
// positivity and normalization blocks.
FamilyCounts assembled_counts(const LmiProblem& p);

}  // namespace doa
