#pragma once

// Discrete-time switched linear plant with saturating actuators:
//   x(t+1) = A_i x(t) + B_i sat(K_i x(t)),  i = active mode,
// where sat clamps each input channel to [-1, 1]. Includes dwell-time
// switching schedules and exact trajectory simulation.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace doa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Mode {
  Matrix A;  // n x n state matrix
  Matrix B;  // n x m input matrix
  Matrix K;  // m x n state-feedback gain
  std::string label;
};

struct SwitchedSystem {
  std::vector<Mode> modes;
  int n = 0;  // state dimension
  int m = 0;  // input dimension

  int mode_count() const { return static_cast<int>(modes.size()); }

  // Throws std::invalid_argument with a row/column diagnostic on any
  // dimension mismatch or non-finite entry.
  void validate() const;
};

// Piecewise-constant mode signal. Interval k is [switch_times[k],
// switch_times[k+1]); the last interval extends to any horizon.
struct Schedule {
  std::vector<int> switch_times;    // t_0 = 0 < t_1 < ...
  std::vector<int> interval_modes;  // 0-based mode per interval; consecutive differ

  int mode_at(int t) const;
  // Switching instants t_1, t_2, ... strictly inside (0, horizon).
  std::vector<int> switching_instants(int horizon) const;
  void validate(int mode_count) const;  // throws std::invalid_argument
};

// Component-wise clamp to [-1, 1]. Throws std::invalid_argument on
// non-finite input.
Vector saturate(const Vector& u);

// One step of the closed loop in the given mode: A x + B sat(K x).
Vector step(const SwitchedSystem& sys, int mode, const Vector& x);

// t-fold composition of step in a single mode; t = 0 returns x.
Vector iterate(const SwitchedSystem& sys, int mode, Vector x, int t);

// True iff every gap between consecutive switches is >= tau.
bool is_dwell_admissible(const Schedule& s, int tau);

// Deterministic random schedule: gaps uniform on [tau, 3*tau], next mode
// uniform over the other modes. Always dwell-admissible for tau.
Schedule random_admissible_schedule(int mode_count, int tau, int horizon,
                                    std::uint64_t seed);

// Cycle through mode_cycle (0-based), each interval lasting `dwell` steps,
// until the horizon is covered.
Schedule periodic_schedule(const std::vector<int>& mode_cycle, int dwell,
                           int horizon);

struct Certificate;  // defined in certificate.hpp

struct Trajectory {
  std::vector<Vector> states;    // x(0..T)
  Schedule schedule;
  std::vector<double> lyapunov;  // x(t)' P_{mode(t)} x(t); empty without certificate
};

// Exact rollout over `horizon` steps. When a certificate is supplied the
// active-mode Lyapunov value is attached per step.
Trajectory simulate(const SwitchedSystem& sys, const Schedule& s,
                    const Vector& x0, int horizon,
                    const Certificate* cert = nullptr);

}  // namespace doa
