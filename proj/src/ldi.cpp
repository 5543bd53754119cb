#include "doa/ldi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace doa {

std::vector<SubsetMask> enumerate_subsets(int m) {
  if (m < 1) throw std::invalid_argument("enumerate_subsets: m must be >= 1");
  if (m >= 31) throw std::invalid_argument("enumerate_subsets: m too large");
  std::vector<SubsetMask> out;
  out.reserve(1u << m);
  for (SubsetMask S = 0; S < (1u << m); ++S) out.push_back(S);
  return out;
}

Matrix selector(SubsetMask S, int m) {
  Matrix D = Matrix::Zero(m, m);
  for (int j = 0; j < m; ++j)
    if (S & (1u << j)) D(j, j) = 1.0;
  return D;
}

Matrix complement_selector(SubsetMask S, int m) {
  return Matrix::Identity(m, m) - selector(S, m);
}

Matrix vertex_matrix(const SwitchedSystem& sys, int mode, SubsetMask S) {
  if (mode < 0 || mode >= sys.mode_count())
    throw std::invalid_argument("vertex_matrix: mode index out of range");
  const Mode& md = sys.modes[mode];
  return md.A + md.B * complement_selector(S, sys.m) * md.K;
}

std::vector<std::vector<SubsetMask>> enumerate_tuples(int m, int t) {
  if (t < 1) throw std::invalid_argument("enumerate_tuples: t must be >= 1");
  const auto subs = enumerate_subsets(m);
  std::vector<std::vector<SubsetMask>> out;
  out.reserve(static_cast<std::size_t>(std::pow(subs.size(), t)));
  std::vector<std::size_t> odo(static_cast<std::size_t>(t), 0);
  while (true) {
    std::vector<SubsetMask> tup(static_cast<std::size_t>(t));
    for (int k = 0; k < t; ++k) tup[k] = subs[odo[k]];
    out.push_back(std::move(tup));
    // Row-major advance: last level fastest.
    int k = t - 1;
    while (k >= 0 && ++odo[k] == subs.size()) odo[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

ThetaFamily theta(const SwitchedSystem& sys, int mode,
                  const std::vector<SubsetMask>& tuple) {
  if (tuple.empty()) throw std::invalid_argument("theta: empty tuple");
  const Mode& md = sys.modes.at(static_cast<std::size_t>(mode));
  ThetaFamily fam;
  fam.mode = mode;
  fam.tuple = tuple;
  // Level recursion: appending level t maps vertex(z) to
  // M(S_t) vertex(z) + B D_{S_t} H_t x, so every existing coefficient is
  // premultiplied by M(S_t) and one new gain coefficient B D_{S_t} appears.
  fam.theta0 = vertex_matrix(sys, mode, tuple[0]);
  fam.thetas.push_back(md.B * selector(tuple[0], sys.m));
  for (std::size_t k = 1; k < tuple.size(); ++k) {
    const Matrix M = vertex_matrix(sys, mode, tuple[k]);
    fam.theta0 = M * fam.theta0;
    for (Matrix& T : fam.thetas) T = M * T;
    fam.thetas.push_back(md.B * selector(tuple[k], sys.m));
  }
  return fam;
}

Vector vertex_eval(const ThetaFamily& fam, const std::vector<Matrix>& H_list,
                   const Vector& x) {
  if (H_list.size() != fam.thetas.size())
    throw std::invalid_argument("vertex_eval: gain list length mismatch");
  if (x.size() != fam.theta0.cols())
    throw std::invalid_argument("vertex_eval: state dimension mismatch");
  Vector v = fam.theta0 * x;
  for (std::size_t k = 0; k < fam.thetas.size(); ++k) {
    if (H_list[k].rows() != fam.thetas[k].cols() ||
        H_list[k].cols() != x.size())
      throw std::invalid_argument("vertex_eval: gain shape mismatch");
    v += fam.thetas[k] * (H_list[k] * x);
  }
  return v;
}

HullWitness hull_membership(const SwitchedSystem& sys, int mode,
                            const std::vector<Matrix>& H_list,
                            const Vector& x) {
  const int t = static_cast<int>(H_list.size());
  if (t < 1) throw std::invalid_argument("hull_membership: empty gain list");
  const int m = sys.m;
  for (int k = 0; k < t; ++k) {
    const double band = (H_list[k] * x).cwiseAbs().maxCoeff();
    if (band > 1.0 + 1e-12)
      throw std::domain_error(
          "hull_membership: state outside the level-" + std::to_string(k + 1) +
          " gain band (|Hx|_inf = " + std::to_string(band) + ")");
  }

  // Per level k and channel j, write sat(u_j) as an interpolation
  //   sat(u_j) = a * u_j + (1 - a) * v_j,   a in [0, 1],
  // between the nominal input u = K z_{k-1} (z = true trajectory from x) and
  // the anchored auxiliary input v = H_k x. The clamp always lies between the
  // two because |v_j| <= 1. Products of the per-level factors are the convex
  // weights of the corresponding vertices.
  std::vector<Matrix> alpha(static_cast<std::size_t>(t));
  Vector z = x;
  const Mode& md = sys.modes.at(static_cast<std::size_t>(mode));
  for (int k = 0; k < t; ++k) {
    const Vector u = md.K * z;
    const Vector v = H_list[k] * x;
    const Vector s = saturate(u);
    alpha[k] = Matrix::Zero(m, 1);
    for (int j = 0; j < m; ++j) {
      double a;
      if (std::abs(u[j] - v[j]) < 1e-14) {
        a = 1.0;  // degenerate: both inputs agree, any split works
      } else {
        a = (s[j] - v[j]) / (u[j] - v[j]);
        a = std::min(1.0, std::max(0.0, a));
      }
      alpha[k](j, 0) = a;
    }
    z = md.A * z + md.B * s;
  }

  HullWitness w;
  w.tuples = enumerate_tuples(m, t);
  w.weights.reserve(w.tuples.size());
  w.reconstruction = Vector::Zero(sys.n);
  for (const auto& tup : w.tuples) {
    double weight = 1.0;
    for (int k = 0; k < t; ++k) {
      for (int j = 0; j < m; ++j) {
        const bool in_S = (tup[k] & (1u << j)) != 0;
        weight *= in_S ? (1.0 - alpha[k](j, 0)) : alpha[k](j, 0);
      }
    }
    w.weights.push_back(weight);
    if (weight != 0.0)
      w.reconstruction += weight * vertex_eval(theta(sys, mode, tup), H_list, x);
  }
  w.reconstruction_error = (w.reconstruction - z).norm();
  return w;
}

std::string subset_to_string(SubsetMask S, int m) {
  std::string out = "{";
  bool first = true;
  for (int j = 0; j < m; ++j) {
    if (S & (1u << j)) {
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
    }
  }
  out += "}";
  return out;
}

}  // namespace doa
