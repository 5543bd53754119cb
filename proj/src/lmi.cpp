#include "doa/lmi.hpp"

#include "doa/ldi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace doa {

namespace {

// Symmetric basis matrix for the (r,c) upper-triangle entry: unit at (r,r)
// when r == c, else 1 at (r,c) and (c,r).
Matrix sym_basis(int r, int c, int n) {
  Matrix E = Matrix::Zero(n, n);
  E(r, c) = 1.0;
  E(c, r) = 1.0;
  return E;
}

void add_coeff(BlockConstraint& b, int var, const Matrix& T) {
  auto [it, inserted] = b.coeff.try_emplace(var, T);
  if (!inserted) it->second += T;
}

std::string tuple_tag(const std::vector<SubsetMask>& tup, int m) {
  std::string out = "(";
  for (std::size_t k = 0; k < tup.size(); ++k) {
    if (k > 0) out += ",";
    out += subset_to_string(tup[k], m);
  }
  out += ")";
  return out;
}

}  // namespace

int VariableLayout::q_index(int mode, int r, int c) const {
  if (r > c) std::swap(r, c);
  // Offset of (r,c) in the row-major upper triangle.
  const int tri = r * n - r * (r - 1) / 2 + (c - r);
  return mode * per_mode() + tri;
}

int VariableLayout::y_index(int mode, int level, int r, int c) const {
  return mode * per_mode() + tri_count() + level * m * n + r * n + c;
}

VariableLayout::Entry VariableLayout::describe(int v) const {
  Entry e{};
  e.mode = v / per_mode();
  int off = v % per_mode();
  if (off < tri_count()) {
    e.kind = 'Q';
    e.level = -1;
    // Invert the row-major upper-triangle offset.
    int r = 0;
    while (off >= n - r) {
      off -= n - r;
      ++r;
    }
    e.row = r;
    e.col = r + off;
  } else {
    e.kind = 'Y';
    off -= tri_count();
    e.level = off / (m * n);
    off %= m * n;
    e.row = off / n;
    e.col = off % n;
  }
  return e;
}

FamilyCounts count_constraints(int modes, int m, int n, int tau) {
  if (modes < 1 || m < 1 || n < 1 || tau < 1)
    throw std::invalid_argument("count_constraints: all arguments must be positive");
  FamilyCounts c;
  const long tuples = static_cast<long>(std::llround(std::pow(2.0, m * tau)));
  c.within = static_cast<long>(modes) * (1L << m);
  c.switching = static_cast<long>(modes) * (modes - 1) * tuples;
  c.band = static_cast<long>(modes) * tau * m;
  c.total = c.within + c.switching + c.band;
  return c;
}

LmiProblem build_saturated_dwell(const SwitchedSystem& sys, int tau,
                                 double eps) {
  if (tau < 1) throw std::invalid_argument("build_saturated_dwell: tau >= 1");
  if (eps <= 0) throw std::invalid_argument("build_saturated_dwell: eps > 0");
  sys.validate();
  const int N = sys.mode_count(), n = sys.n, m = sys.m;

  LmiProblem p;
  p.layout = VariableLayout{N, n, m, tau};
  p.eps = eps;
  p.variable_symbol = 'Q';

  // Positivity: Q_i >= eps I.
  for (int i = 0; i < N; ++i) {
    BlockConstraint b;
    b.kind = BlockKind::StrictPd;
    b.size = n;
    b.constant = Matrix::Zero(n, n);
    b.tag = "positivity mode " + std::to_string(i + 1);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c)
        add_coeff(b, p.layout.q_index(i, r, c), sym_basis(r, c, n));
    p.blocks.push_back(std::move(b));
  }

  // Helper assembling the 2n x 2n decrease block
  //   [[ TL,           X' ],
  //    [ X,            BR ]]     X = theta0 Q_i + sum_t thetas[t] Y_{i,t},
  // TL = Q_i, BR = Q_i (within-mode) or Q_j (switching).
  auto add_decrease_block = [&](int i, int j, const ThetaFamily& fam,
                                std::string tag) {
    BlockConstraint b;
    b.kind = BlockKind::StrictPd;
    b.size = 2 * n;
    b.constant = Matrix::Zero(2 * n, 2 * n);
    b.tag = std::move(tag);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) {
        const Matrix E = sym_basis(r, c, n);
        const Matrix Z = fam.theta0 * E;
        Matrix T = Matrix::Zero(2 * n, 2 * n);
        T.topLeftCorner(n, n) = E;
        T.bottomLeftCorner(n, n) += Z;
        T.topRightCorner(n, n) += Z.transpose();
        if (j == i) T.bottomRightCorner(n, n) = E;
        add_coeff(b, p.layout.q_index(i, r, c), T);
        if (j != i) {
          Matrix Tj = Matrix::Zero(2 * n, 2 * n);
          Tj.bottomRightCorner(n, n) = E;
          add_coeff(b, p.layout.q_index(j, r, c), Tj);
        }
      }
    for (std::size_t t = 0; t < fam.thetas.size(); ++t)
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
          Matrix EY = Matrix::Zero(m, n);
          EY(r, c) = 1.0;
          const Matrix Z = fam.thetas[t] * EY;
          Matrix T = Matrix::Zero(2 * n, 2 * n);
          T.bottomLeftCorner(n, n) += Z;
          T.topRightCorner(n, n) += Z.transpose();
          add_coeff(b, p.layout.y_index(i, static_cast<int>(t), r, c), T);
        }
    p.blocks.push_back(std::move(b));
  };

  // Within-mode one-step decrease, one block per (mode, subset).
  for (int i = 0; i < N; ++i)
    for (SubsetMask S : enumerate_subsets(m))
      add_decrease_block(i, i, theta(sys, i, {S}),
                         "within-mode i=" + std::to_string(i + 1) +
                             " S=" + subset_to_string(S, m));

  // Switching decrease over the dwell window, one block per ordered pair and
  // per tau-tuple of subsets.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      for (const auto& tup : enumerate_tuples(m, tau))
        add_decrease_block(i, j, theta(sys, i, tup),
                           "switch i=" + std::to_string(i + 1) +
                               " j=" + std::to_string(j + 1) +
                               " tuple=" + tuple_tag(tup, m));
    }

  // Gain-band containment rows: [[1, y],[y', Q_i]] >= 0 keeps the ellipsoid
  // {x' Q_i^{-1} x <= 1} inside {|H_{i,t}^{j.} x| <= 1}.
  for (int i = 0; i < N; ++i)
    for (int t = 0; t < tau; ++t)
      for (int j = 0; j < m; ++j) {
        BlockConstraint b;
        b.kind = BlockKind::Psd;
        b.size = 1 + n;
        b.constant = Matrix::Zero(1 + n, 1 + n);
        b.constant(0, 0) = 1.0;
        b.tag = "band i=" + std::to_string(i + 1) +
                " t=" + std::to_string(t + 1) + " row=" + std::to_string(j + 1);
        for (int r = 0; r < n; ++r)
          for (int c = r; c < n; ++c) {
            Matrix T = Matrix::Zero(1 + n, 1 + n);
            T.bottomRightCorner(n, n) = sym_basis(r, c, n);
            add_coeff(b, p.layout.q_index(i, r, c), T);
          }
        for (int c = 0; c < n; ++c) {
          Matrix T = Matrix::Zero(1 + n, 1 + n);
          T(0, 1 + c) = 1.0;
          T(1 + c, 0) = 1.0;
          add_coeff(b, p.layout.y_index(i, t, j, c), T);
        }
        p.blocks.push_back(std::move(b));
      }

  // Maximize sum of traces of the Q_i (ellipsoid size proxy).
  p.objective.assign(static_cast<std::size_t>(p.layout.count()), 0.0);
  for (int i = 0; i < N; ++i)
    for (int r = 0; r < n; ++r)
      p.objective[static_cast<std::size_t>(p.layout.q_index(i, r, r))] = 1.0;
  return p;
}

LmiProblem build_unsaturated_dwell(const SwitchedSystem& sys, int tau,
                                   double eps) {
  if (tau < 1) throw std::invalid_argument("build_unsaturated_dwell: tau >= 1");
  sys.validate();
  const int N = sys.mode_count(), n = sys.n;

  LmiProblem p;
  p.layout = VariableLayout{N, n, sys.m, 0};
  p.eps = eps;
  p.variable_symbol = 'P';

  std::vector<Matrix> Abar;
  for (int i = 0; i < N; ++i)
    Abar.push_back(sys.modes[i].A + sys.modes[i].B * sys.modes[i].K);

  auto quad_block = [&](int i, int j, const Matrix& A, std::string tag) {
    // P_i - A' P_j A >= eps I, affine in the P entries.
    BlockConstraint b;
    b.kind = BlockKind::StrictPd;
    b.size = n;
    b.constant = Matrix::Zero(n, n);
    b.tag = std::move(tag);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) {
        const Matrix E = sym_basis(r, c, n);
        add_coeff(b, p.layout.q_index(i, r, c), E);
        add_coeff(b, p.layout.q_index(j, r, c), -(A.transpose() * E * A));
      }
    p.blocks.push_back(std::move(b));
  };

  for (int i = 0; i < N; ++i) {
    BlockConstraint b;
    b.kind = BlockKind::StrictPd;
    b.size = n;
    b.constant = Matrix::Zero(n, n);
    b.tag = "positivity mode " + std::to_string(i + 1);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c)
        add_coeff(b, p.layout.q_index(i, r, c), sym_basis(r, c, n));
    p.blocks.push_back(std::move(b));
  }
  for (int i = 0; i < N; ++i)
    quad_block(i, i, Abar[i], "within-mode i=" + std::to_string(i + 1));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      Matrix Ak = Matrix::Identity(n, n);
      for (int k = 0; k < tau; ++k) Ak = Abar[i] * Ak;
      quad_block(i, j, Ak,
                 "switch i=" + std::to_string(i + 1) +
                     " j=" + std::to_string(j + 1));
    }

  // The feasibility cone is invariant under scaling P -> t P (t >= 1), which
  // interior-point solvers dislike; cap the total trace to anchor it.
  {
    BlockConstraint b;
    b.kind = BlockKind::Psd;
    b.size = 1;
    b.constant = Matrix::Constant(1, 1, 100.0 * N * n);
    b.tag = "normalization";
    for (int i = 0; i < N; ++i)
      for (int r = 0; r < n; ++r)
        add_coeff(b, p.layout.q_index(i, r, r), -Matrix::Identity(1, 1));
    p.blocks.push_back(std::move(b));
  }
  return p;  // no objective: pure feasibility
}

LmiProblem build_contraction_baseline(const SwitchedSystem& sys, double lambda,
                                      double eps) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("build_contraction_baseline: lambda in (0,1)");
  sys.validate();
  const int N = sys.mode_count(), n = sys.n, m = sys.m;

  LmiProblem p;
  p.layout = VariableLayout{N, n, m, 1};
  p.eps = eps;
  p.variable_symbol = 'Q';

  for (int i = 0; i < N; ++i) {
    BlockConstraint b;
    b.kind = BlockKind::StrictPd;
    b.size = n;
    b.constant = Matrix::Zero(n, n);
    b.tag = "positivity mode " + std::to_string(i + 1);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c)
        add_coeff(b, p.layout.q_index(i, r, c), sym_basis(r, c, n));
    p.blocks.push_back(std::move(b));
  }

  // Per-step contraction by lambda at every saturation vertex:
  //   [[ lambda Q_i, X' ],[ X, Q_i ]] with X = M(S) Q_i + B D_S Y_i.
  for (int i = 0; i < N; ++i) {
    const Mode& md = sys.modes[i];
    for (SubsetMask S : enumerate_subsets(m)) {
      const Matrix M = vertex_matrix(sys, i, S);
      const Matrix BD = md.B * selector(S, m);
      BlockConstraint b;
      b.kind = BlockKind::StrictPd;
      b.size = 2 * n;
      b.constant = Matrix::Zero(2 * n, 2 * n);
      b.tag = "within-mode i=" + std::to_string(i + 1) +
              " S=" + subset_to_string(S, m);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
          const Matrix E = sym_basis(r, c, n);
          const Matrix Z = M * E;
          Matrix T = Matrix::Zero(2 * n, 2 * n);
          T.topLeftCorner(n, n) = lambda * E;
          T.bottomRightCorner(n, n) = E;
          T.bottomLeftCorner(n, n) += Z;
          T.topRightCorner(n, n) += Z.transpose();
          add_coeff(b, p.layout.q_index(i, r, c), T);
        }
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
          Matrix EY = Matrix::Zero(m, n);
          EY(r, c) = 1.0;
          const Matrix Z = BD * EY;
          Matrix T = Matrix::Zero(2 * n, 2 * n);
          T.bottomLeftCorner(n, n) += Z;
          T.topRightCorner(n, n) += Z.transpose();
          add_coeff(b, p.layout.y_index(i, 0, r, c), T);
        }
      p.blocks.push_back(std::move(b));
    }
  }

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < m; ++j) {
      BlockConstraint b;
      b.kind = BlockKind::Psd;
      b.size = 1 + n;
      b.constant = Matrix::Zero(1 + n, 1 + n);
      b.constant(0, 0) = 1.0;
      b.tag = "band i=" + std::to_string(i + 1) + " t=1 row=" +
              std::to_string(j + 1);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
          Matrix T = Matrix::Zero(1 + n, 1 + n);
          T.bottomRightCorner(n, n) = sym_basis(r, c, n);
          add_coeff(b, p.layout.q_index(i, r, c), T);
        }
      for (int c = 0; c < n; ++c) {
        Matrix T = Matrix::Zero(1 + n, 1 + n);
        T(0, 1 + c) = 1.0;
        T(1 + c, 0) = 1.0;
        add_coeff(b, p.layout.y_index(i, 0, j, c), T);
      }
      p.blocks.push_back(std::move(b));
    }

  p.objective.assign(static_cast<std::size_t>(p.layout.count()), 0.0);
  for (int i = 0; i < N; ++i)
    for (int r = 0; r < n; ++r)
      p.objective[static_cast<std::size_t>(p.layout.q_index(i, r, r))] = 1.0;
  return p;
}

Matrix evaluate_block(const BlockConstraint& b, const std::vector<double>& x) {
  Matrix M = b.constant;
  for (const auto& [v, T] : b.coeff)
    M += x.at(static_cast<std::size_t>(v)) * T;
  return M;
}

FamilyCounts assembled_counts(const LmiProblem& p) {
  FamilyCounts c;
  for (const auto& b : p.blocks) {
    if (b.tag.rfind("within-mode", 0) == 0)
      ++c.within;
    else if (b.tag.rfind("switch", 0) == 0)
      ++c.switching;
    else if (b.tag.rfind("band", 0) == 0)
      ++c.band;
  }
  c.total = c.within + c.switching + c.band;
  return c;
}

}  // namespace doa
