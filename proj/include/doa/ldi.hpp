#pragma once

// Polytopic (linear differential inclusion) model of saturation: for each
// subset S of input channels, the channels in S are replaced by auxiliary
// feedback H x while the rest keep their nominal gain K. Multi-step maps are
// covered by nesting this decomposition; every resulting vertex is affine in
// the auxiliary gains, which is what makes the certificate conditions linear.

#include "doa/model.hpp"

#include <vector>

namespace doa {

// Subset of input channels as a bitmask: bit j set <=> channel j in S.
using SubsetMask = unsigned;

// All 2^m subsets in ascending bitmask order (the canonical order used by
// every constraint enumeration downstream).
std::vector<SubsetMask> enumerate_subsets(int m);

// Diagonal 0/1 selector D_S (1 exactly at channels in S).
Matrix selector(SubsetMask S, int m);

// I - D_S, the selector of the complement subset.
Matrix complement_selector(SubsetMask S, int m);

// State coefficient of the one-step vertex: A + B D_{S^c} K (channels outside
// S keep the nominal gain; channels in S contribute through the auxiliary
// gain term B D_S H instead).
Matrix vertex_matrix(const SwitchedSystem& sys, int mode, SubsetMask S);

// All tuples (S_1..S_t) in row-major order (S_1 slowest, ascending masks).
std::vector<std::vector<SubsetMask>> enumerate_tuples(int m, int t);

// Affine decomposition of the t-step vertex map for one tuple:
//   vertex(x) = theta0 x + sum_k thetas[k-1] H_k x
// with theta0 = M(S_t)...M(S_1) and thetas[k-1] = M(S_t)...M(S_{k+1}) B D_{S_k}
// (empty product = identity). Built by the level recursion, not the closed
// form, so tests can cross-check the two.
struct ThetaFamily {
  int mode = 0;
  std::vector<SubsetMask> tuple;
  Matrix theta0;               // n x n
  std::vector<Matrix> thetas;  // t entries, each n x m
};

ThetaFamily theta(const SwitchedSystem& sys, int mode,
                  const std::vector<SubsetMask>& tuple);

// theta0 x + sum_k thetas[k] H_list[k] x. Throws std::invalid_argument on
// shape mismatch.
Vector vertex_eval(const ThetaFamily& fam, const std::vector<Matrix>& H_list,
                   const Vector& x);

// Constructive convex-combination witness: weights over all 2^{m t} tuples
// that reproduce the true t-step state F_i^t(x) as a convex combination of
// the vertices. Valid whenever ||H_k x||_inf <= 1 for every level k
// (otherwise throws std::domain_error: the polytopic model does not cover x).
struct HullWitness {
  std::vector<std::vector<SubsetMask>> tuples;  // canonical order
  std::vector<double> weights;                  // non-negative, sum to 1
  Vector reconstruction;                        // sum_i weights[i] * vertex_i(x)
  double reconstruction_error = 0.0;            // ||reconstruction - F_i^t(x)||
};

HullWitness hull_membership(const SwitchedSystem& sys, int mode,
                            const std::vector<Matrix>& H_list, const Vector& x);

// "{}", "{1}", "{1,2}", ... (1-based channels) for diagnostics and tags.
std::string subset_to_string(SubsetMask S, int m);

}  // namespace doa
