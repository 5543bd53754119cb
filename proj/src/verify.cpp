#include "doa/verify.hpp"

#include "doa/geometry.hpp"
#include "doa/ldi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace doa {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LyapunovCheck check_lyapunov_decrease(const SwitchedSystem& sys,
                                      const Certificate& cert,
                                      const Trajectory& traj) {
  LyapunovCheck chk;
  const Schedule& s = traj.schedule;
  const int T = static_cast<int>(traj.states.size()) - 1;
  constexpr double kRelSlack = 1e-10;
  constexpr double kZeroNorm = 1e-12;

  for (int t = 0; t + 1 <= T; ++t) {
    if (s.mode_at(t) != s.mode_at(t + 1)) continue;  // interval boundary
    const int i = s.mode_at(t);
    if (traj.states[static_cast<std::size_t>(t)].norm() < kZeroNorm) continue;
    const double v0 = lyapunov_value(cert, i, traj.states[static_cast<std::size_t>(t)]);
    const double v1 =
        lyapunov_value(cert, i, traj.states[static_cast<std::size_t>(t + 1)]);
    ++chk.steps_checked;
    if (v1 >= v0 * (1.0 + kRelSlack)) ++chk.within_violations;
  }

  std::vector<int> instants = {0};
  for (int tk : s.switching_instants(T + 1)) instants.push_back(tk);
  for (std::size_t k = 0; k + 1 < instants.size(); ++k) {
    const int ta = instants[k], tb = instants[k + 1];
    if (traj.states[static_cast<std::size_t>(ta)].norm() < kZeroNorm) continue;
    const double va =
        lyapunov_value(cert, s.mode_at(ta), traj.states[static_cast<std::size_t>(ta)]);
    const double vb =
        lyapunov_value(cert, s.mode_at(tb), traj.states[static_cast<std::size_t>(tb)]);
    if (vb >= va * (1.0 + kRelSlack)) ++chk.switch_violations;
    if (va > 0) chk.worst_switch_ratio = std::max(chk.worst_switch_ratio, vb / va);
  }
  return chk;
}

namespace {

// Uniform angle on the boundary of one ellipsoid, rejected until the point
// lies in every other ellipsoid: a boundary sample of the intersection.
Vector sample_intersection_boundary(const Certificate& cert,
                                    std::mt19937_64& gen) {
  const int N = static_cast<int>(cert.P.size());
  const int n = static_cast<int>(cert.P.front().rows());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int i = static_cast<int>(gen() % static_cast<std::uint64_t>(N));
    Eigen::SelfAdjointEigenSolver<Matrix> es(cert.P[static_cast<std::size_t>(i)]);
    Vector dir(n);
    if (n == 2) {
      const double th = 2.0 * M_PI * uni(gen);
      dir << std::cos(th), std::sin(th);
    } else {
      for (int k = 0; k < n; ++k) dir[k] = gauss(gen);
      dir.normalize();
    }
    const Vector x = es.eigenvectors() *
                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                     dir;
    bool in_all = true;
    for (int j = 0; j < N && in_all; ++j)
      in_all = ellipsoid_contains(cert.P[static_cast<std::size_t>(j)], x, 1e-12);
    if (in_all) return x;
  }
  throw std::runtime_error("could not sample the intersection boundary");
}

}  // namespace

VerificationReport monte_carlo_doa(const SwitchedSystem& sys,
                                   const Certificate& cert, int trials,
                                   int horizon, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_doa: trials >= 1");
  if (cert.tau < 1) throw std::invalid_argument("monte_carlo_doa: bad certificate");
  if (horizon <= 0) horizon = 200 * cert.tau;
  const int N = sys.mode_count();

  VerificationReport rep;
  rep.trials = trials;
  std::vector<double> final_norms;
  final_norms.reserve(static_cast<std::size_t>(trials));
  std::uint64_t master = seed;

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = splitmix64(master);
    std::mt19937_64 gen(trial_seed);
    Vector x = sample_intersection_boundary(cert, gen);
    const Schedule sched =
        random_admissible_schedule(N, cert.tau, horizon, splitmix64(master));

    bool union_ok = true, band_ok = true, active_ok = true, exited = false;
    int union_t = -1, band_t = -1;
    for (int t = 0; t < horizon; ++t) {
      bool in_any = false, in_all = true;
      for (int i = 0; i < N; ++i) {
        const bool in_i = ellipsoid_contains(cert.P[static_cast<std::size_t>(i)], x, 1e-9);
        in_any = in_any || in_i;
        in_all = in_all && in_i;
      }
      if (!in_any && union_ok) {
        union_ok = false;
        union_t = t;
      }
      if (!in_all) exited = true;
      const int active = sched.mode_at(t);
      for (int i = 0; i < N; ++i)
        for (int lev = 0; lev < cert.tau; ++lev) {
          const double v = (cert.H[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(lev)] *
                            x)
                               .cwiseAbs()
                               .maxCoeff();
          rep.worst_band_value = std::max(rep.worst_band_value, v);
          if (i == active)
            rep.worst_active_band_value =
                std::max(rep.worst_active_band_value, v);
          if (v > 1.0 + 1e-9) {
            if (band_ok) band_t = t;
            band_ok = false;
            if (i == active) active_ok = false;
          }
        }
      x = step(sys, active, x);
    }
    const double fin = x.norm();
    final_norms.push_back(fin);
    rep.worst_final_norm = std::max(rep.worst_final_norm, fin);
    const bool conv_ok = fin < 1e-6;

    if (!conv_ok) {
      ++rep.convergence_failures;
      rep.failures.push_back({trial, trial_seed, "convergence", horizon});
    }
    if (!union_ok) {
      ++rep.union_failures;
      rep.failures.push_back({trial, trial_seed, "union", union_t});
    }
    if (!band_ok) {
      ++rep.band_failures;
      rep.failures.push_back({trial, trial_seed, "band", band_t});
    }
    if (!active_ok) ++rep.active_band_failures;
    if (conv_ok && union_ok && band_ok && exited) rep.transient_exit_seen = true;
  }

  std::sort(final_norms.begin(), final_norms.end());
  rep.median_final_norm = final_norms[final_norms.size() / 2];
  return rep;
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  out << "Monte-Carlo verification over " << trials << " trials: "
      << (all_passed() ? "PASSED" : "FAILED") << "\n"
      << "  convergence failures:        " << convergence_failures << "\n"
      << "  union-membership failures:   " << union_failures << "\n"
      << "  gain-band failures (all modes): " << band_failures << "\n"
      << "  gain-band failures (active mode): " << active_band_failures << "\n"
      << "  worst band value (all/active): " << worst_band_value << " / "
      << worst_active_band_value << "\n"
      << "  final norm (worst/median):   " << worst_final_norm << " / "
      << median_final_norm << "\n"
      << "  transient exit from the intersection seen: "
      << (transient_exit_seen ? "yes" : "no") << "\n";
  return out.str();
}

LdiValidityCheck check_ldi_validity_along(const SwitchedSystem& sys,
                                          const Certificate& cert,
                                          const Trajectory& traj) {
  LdiValidityCheck chk;
  const Schedule& s = traj.schedule;
  const int T = static_cast<int>(traj.states.size()) - 1;
  for (int t0 = 0; t0 < T; ++t0) {
    const int i = s.mode_at(t0);
    // Remaining steps inside the current interval.
    int rem = 0;
    while (t0 + rem < T && s.mode_at(t0 + rem) == i) ++rem;
    const int depth = std::min(rem, cert.tau);
    std::vector<Matrix> H_list(
        cert.H[static_cast<std::size_t>(i)].begin(),
        cert.H[static_cast<std::size_t>(i)].begin() + depth);
    ++chk.steps_checked;
    try {
      const HullWitness w = hull_membership(
          sys, i, H_list, traj.states[static_cast<std::size_t>(t0)]);
      chk.worst_reconstruction_error =
          std::max(chk.worst_reconstruction_error, w.reconstruction_error);
      if (w.reconstruction_error > 1e-9) ++chk.invalid_steps;
    } catch (const std::domain_error&) {
      ++chk.invalid_steps;
    }
  }
  return chk;
}

}  // namespace doa
