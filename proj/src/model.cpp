#include "doa/model.hpp"

#include "doa/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace doa {

void SwitchedSystem::validate() const {
  if (modes.empty()) throw std::invalid_argument("system has no modes");
  if (n <= 0 || m <= 0)
    throw std::invalid_argument("state/input dimensions must be positive");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Mode& md = modes[i];
    auto check = [&](const Matrix& M, const char* name, int rows, int cols) {
      if (M.rows() != rows || M.cols() != cols)
        throw std::invalid_argument(
            "mode " + std::to_string(i + 1) + ": " + name + " is " +
            std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
      if (!M.allFinite())
        throw std::invalid_argument("mode " + std::to_string(i + 1) + ": " +
                                    name + " has non-finite entries");
    };
    check(md.A, "A", n, n);
    check(md.B, "B", n, m);
    check(md.K, "K", m, n);
  }
}

int Schedule::mode_at(int t) const {
  if (switch_times.empty()) throw std::invalid_argument("empty schedule");
  // Last interval whose start is <= t.
  auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - switch_times.begin());
  if (k == 0) throw std::invalid_argument("time before schedule start");
  return interval_modes[std::min(k - 1, interval_modes.size() - 1)];
}

std::vector<int> Schedule::switching_instants(int horizon) const {
  std::vector<int> out;
  for (std::size_t k = 1; k < switch_times.size(); ++k)
    if (switch_times[k] < horizon) out.push_back(switch_times[k]);
  return out;
}

void Schedule::validate(int mode_count) const {
  if (switch_times.empty() || switch_times.front() != 0)
    throw std::invalid_argument("schedule must start at t=0");
  if (switch_times.size() != interval_modes.size())
    throw std::invalid_argument("switch_times/interval_modes length mismatch");
  for (std::size_t k = 1; k < switch_times.size(); ++k)
    if (switch_times[k] <= switch_times[k - 1])
      throw std::invalid_argument("switch times must be strictly increasing");
  for (std::size_t k = 0; k < interval_modes.size(); ++k) {
    if (interval_modes[k] < 0 || interval_modes[k] >= mode_count)
      throw std::invalid_argument("mode index out of range in schedule");
    if (k > 0 && interval_modes[k] == interval_modes[k - 1])
      throw std::invalid_argument("consecutive intervals must change mode");
  }
}

Vector saturate(const Vector& u) {
  if (!u.allFinite()) throw std::invalid_argument("saturate: non-finite input");
  return u.cwiseMax(-1.0).cwiseMin(1.0);
}

Vector step(const SwitchedSystem& sys, int mode, const Vector& x) {
  if (mode < 0 || mode >= sys.mode_count())
    throw std::invalid_argument("step: mode index out of range");
  if (x.size() != sys.n)
    throw std::invalid_argument("step: state dimension mismatch");
  const Mode& md = sys.modes[mode];
  return md.A * x + md.B * saturate(md.K * x);
}

Vector iterate(const SwitchedSystem& sys, int mode, Vector x, int t) {
  if (t < 0) throw std::invalid_argument("iterate: negative step count");
  for (int k = 0; k < t; ++k) x = step(sys, mode, x);
  return x;
}

bool is_dwell_admissible(const Schedule& s, int tau) {
  for (std::size_t k = 1; k < s.switch_times.size(); ++k)
    if (s.switch_times[k] - s.switch_times[k - 1] < tau) return false;
  return true;
}

Schedule random_admissible_schedule(int mode_count, int tau, int horizon,
                                    std::uint64_t seed) {
  if (mode_count < 1 || tau < 1 || horizon < 1)
    throw std::invalid_argument("random_admissible_schedule: bad arguments");
  std::mt19937_64 gen(seed);
  Schedule s;
  int t = 0;
  int mode = static_cast<int>(gen() % static_cast<std::uint64_t>(mode_count));
  std::uniform_int_distribution<int> gap(tau, 3 * tau);
  while (t < horizon) {
    s.switch_times.push_back(t);
    s.interval_modes.push_back(mode);
    if (mode_count == 1) break;  // no admissible switch target exists
    t += gap(gen);
    int nxt = static_cast<int>(gen() % static_cast<std::uint64_t>(mode_count - 1));
    mode = (nxt < mode) ? nxt : nxt + 1;
  }
  return s;
}

Schedule periodic_schedule(const std::vector<int>& mode_cycle, int dwell,
                           int horizon) {
  if (mode_cycle.empty() || dwell < 1)
    throw std::invalid_argument("periodic_schedule: bad arguments");
  Schedule s;
  int t = 0;
  std::size_t k = 0;
  while (t < horizon) {
    s.switch_times.push_back(t);
    s.interval_modes.push_back(mode_cycle[k % mode_cycle.size()]);
    if (mode_cycle.size() == 1) break;
    t += dwell;
    ++k;
  }
  return s;
}

Trajectory simulate(const SwitchedSystem& sys, const Schedule& s,
                    const Vector& x0, int horizon, const Certificate* cert) {
  if (x0.size() != sys.n)
    throw std::invalid_argument("simulate: initial state dimension mismatch");
  s.validate(sys.mode_count());
  Trajectory traj;
  traj.schedule = s;
  traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.states.push_back(x0);
  for (int t = 0; t < horizon; ++t)
    traj.states.push_back(step(sys, s.mode_at(t), traj.states.back()));
  if (cert != nullptr) {
    traj.lyapunov.reserve(traj.states.size());
    for (int t = 0; t <= horizon; ++t)
      traj.lyapunov.push_back(
          lyapunov_value(*cert, s.mode_at(t), traj.states[t]));
  }
  return traj;
}

double lyapunov_value(const Certificate& cert, int mode, const Vector& x) {
  if (mode < 0 || mode >= static_cast<int>(cert.P.size()))
    throw std::invalid_argument("lyapunov_value: mode index out of range");
  return x.dot(cert.P[mode] * x);
}

}  // namespace doa
