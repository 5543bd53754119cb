#pragma once

// Empirical verification of certificates against the exact nonlinear
// dynamics: Lyapunov decrease along trajectories, Monte-Carlo confirmation
// of the estimated domain of attraction, and validity of the polytopic
// saturation model along trajectories.

#include "doa/certificate.hpp"
#include "doa/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace doa {

struct LyapunovCheck {
  int steps_checked = 0;
  int within_violations = 0;      // V_i not strictly decreasing inside an interval
  int switch_violations = 0;      // V not strictly decreasing across a switch
  double worst_switch_ratio = 0;  // max over switches of V(after)/V(before)
  bool passed() const { return within_violations + switch_violations == 0; }
};

// Checks strict decrease (relative slack 1e-10) of the active-mode Lyapunov
// value inside each interval (ignoring states below norm 1e-12) and of the
// switching-instant sequence V(x(t_k)).
LyapunovCheck check_lyapunov_decrease(const SwitchedSystem& sys,
                                      const Certificate& cert,
                                      const Trajectory& traj);

struct TrialFailure {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string property;  // "convergence", "union", "band"
  int t = 0;
};

struct VerificationReport {
  int trials = 0;
  int convergence_failures = 0;  // ||x(horizon)|| >= 1e-6
  int union_failures = 0;        // x(t) left every ellipsoid
  int band_failures = 0;         // x(t) left some gain band (any mode, any level)
  int active_band_failures = 0;  // x(t) left an *active-mode* gain band
  bool transient_exit_seen = false;  // some passing trial left the intersection
  double worst_final_norm = 0.0;
  double median_final_norm = 0.0;
  double worst_band_value = 0.0;         // max |H_{i,t} x|_inf over everything
  double worst_active_band_value = 0.0;  // same, active mode only
  std::vector<TrialFailure> failures;
  bool all_passed() const {
    return convergence_failures + union_failures + band_failures == 0;
  }
  std::string summary() const;
};

// `trials` starts sampled uniformly on the boundary of the intersection of
// the certificate ellipsoids (rejection from single-ellipsoid boundaries),
// each simulated under an independent random dwell-admissible schedule.
// Checks per trial: (i) convergence at the horizon (default 200*tau when
// horizon <= 0), (ii) union-of-ellipsoids membership for all t, (iii)
// membership of every mode's gain bands for all t. Deterministic per seed;
// per-trial seeds are derived via splitmix64.
VerificationReport monte_carlo_doa(const SwitchedSystem& sys,
                                   const Certificate& cert, int trials,
                                   int horizon, std::uint64_t seed);

struct LdiValidityCheck {
  int steps_checked = 0;
  int invalid_steps = 0;  // polytopic model precondition failed at the state
  double worst_reconstruction_error = 0.0;
  bool passed() const { return invalid_steps == 0; }
};

// At every step with active mode i and t = min(remaining interval, tau),
// requires the convex-hull witness to exist at x(t0) and reconstruct the
// true t-step image within 1e-9.
LdiValidityCheck check_ldi_validity_along(const SwitchedSystem& sys,
                                          const Certificate& cert,
                                          const Trajectory& traj);

// splitmix64 step, used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace doa
