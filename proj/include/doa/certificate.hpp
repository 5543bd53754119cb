#pragma once

// Lyapunov certificate for dwell-time stability of the saturated switched
// system: one quadratic function V_i(x) = x' P_i x per mode plus auxiliary
// feedback gains H_{i,t} that bound the saturated inputs over a dwell window.

#include "doa/model.hpp"

#include <vector>

namespace doa {

struct Certificate {
  int tau = 0;                         // certified minimum dwell-time
  std::vector<Matrix> P;               // per mode, n x n symmetric positive definite
  std::vector<std::vector<Matrix>> H;  // per mode, per level 1..tau, m x n
  double objective = 0.0;              // solver objective (sum of tr(P_i^{-1})), if any
};

// x' P_i x for the given 0-based mode.
double lyapunov_value(const Certificate& cert, int mode, const Vector& x);

}  // namespace doa
