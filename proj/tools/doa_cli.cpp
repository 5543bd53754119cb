// Command-line front end: estimate the domain of attraction of a switched
// linear system with saturating actuators under dwell-time switching, scan
// for the minimal certifiable dwell time, run the contraction baseline,
// simulate trajectories, and export the optimization problems.

#include "doa/geometry.hpp"
#include "doa/io.hpp"
#include "doa/ldi.hpp"
#include "doa/lmi.hpp"
#include "doa/model.hpp"
#include "doa/sdp.hpp"
#include "doa/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace doa;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// "periodic:2,1:2" (1-based cycle, dwell) or "2:2,1:3,..." (mode:duration
// segments, 1-based). Throws std::runtime_error on malformed input.
Schedule parse_schedule(const std::string& desc, int mode_count, int horizon) {
  auto parse_int = [](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("schedule: bad ") + what + " '" + s +
                               "'");
    }
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
  };

  if (desc.rfind("periodic:", 0) == 0) {
    const std::vector<std::string> parts = split(desc, ':');
    if (parts.size() != 3)
      throw std::runtime_error(
          "schedule: expected periodic:<modes>:<dwell>, e.g. periodic:2,1:2");
    std::vector<int> cycle;
    for (const std::string& tok : split(parts[1], ','))
      cycle.push_back(parse_int(tok, "mode") - 1);
    const int dwell = parse_int(parts[2], "dwell");
    if (cycle.empty() || dwell < 1)
      throw std::runtime_error("schedule: cycle must be non-empty, dwell >= 1");
    for (int mode : cycle)
      if (mode < 0 || mode >= mode_count)
        throw std::runtime_error("schedule: mode out of range 1.." +
                                 std::to_string(mode_count));
    return periodic_schedule(cycle, dwell, horizon);
  }

  Schedule s;
  int t = 0;
  for (const std::string& seg : split(desc, ',')) {
    const std::vector<std::string> mv = split(seg, ':');
    if (mv.size() != 2)
      throw std::runtime_error("schedule: expected mode:duration, got '" + seg +
                               "'");
    const int mode = parse_int(mv[0], "mode") - 1;
    const int dur = parse_int(mv[1], "duration");
    if (mode < 0 || mode >= mode_count)
      throw std::runtime_error("schedule: mode out of range 1.." +
                               std::to_string(mode_count));
    if (dur < 1) throw std::runtime_error("schedule: duration must be >= 1");
    s.switch_times.push_back(t);
    s.interval_modes.push_back(mode);
    t += dur;
  }
  if (s.interval_modes.empty())
    throw std::runtime_error("schedule: no segments");
  s.validate(mode_count);
  return s;
}

int cmd_analyze(const std::string& system_path, int tau, double eps,
                const std::string& out_dir, int samples,
                const std::string& adapter) {
  const SwitchedSystem sys = load_system(system_path);
  const LmiProblem problem = build_saturated_dwell(sys, tau, eps);
  const SdpSolution sol = solve(problem, adapter);

  if (sol.status == SolveStatus::Infeasible) {
    std::cerr << "infeasible at dwell time " << tau
              << ": no certificate exists for this formulation\n";
    return kExitInfeasible;
  }
  if (sol.status != SolveStatus::Optimal) {
    std::cerr << "solver failure at dwell time " << tau << " ("
              << sol.solver_message << ")\n";
    return kExitError;
  }

  const Certificate cert = recover_certificate(problem, sol);
  const ValidationReport report = validate_certificate(sys, cert, eps);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  save_certificate(cert, (dir / "certificate.json").string());
  atomic_write_text((dir / "validation.txt").string(), report.summary());

  double area = 0.0;
  std::ostringstream summary;
  summary << "dwell time tau:        " << tau << "\n"
          << "epsilon margin:        " << fmt(eps, "%.3g") << "\n"
          << "solve status:          " << to_string(sol.status) << "\n"
          << "objective (sum tr Q):  " << fmt(sol.objective) << "\n";
  const FamilyCounts counts = assembled_counts(problem);
  summary << "constraint blocks:     " << counts.total << " (within "
          << counts.within << ", switching " << counts.switching << ", band "
          << counts.band << ")\n";
  if (sys.n == 2) {
    area = intersection_area(cert.P, samples);
    summary << "estimate area:         " << fmt(area) << "\n";
    for (int i = 0; i < sys.mode_count(); ++i)
      write_ellipse_boundary_csv(
          cert.P[static_cast<std::size_t>(i)], samples,
          (dir / ("ellipse_" + std::to_string(i + 1) + ".csv")).string());
    write_region_boundary_csv(cert.P, samples, (dir / "region.csv").string());
  } else {
    summary << "estimate area:         n/a (state dimension != 2)\n";
  }
  summary << "validation:            " << (report.passed ? "PASSED" : "FAILED")
          << "\n";
  atomic_write_text((dir / "summary.txt").string(), summary.str());
  std::cout << summary.str();

  return report.passed ? kExitOk : kExitError;
}

int cmd_mindwell(const std::string& system_path, int tau_max, double eps,
                 const std::string& adapter) {
  const SwitchedSystem sys = load_system(system_path);
  const MinDwellResult res = min_dwell_search(sys, tau_max, eps, false, adapter);

  std::cout << "tau  status             blocks  objective     area\n";
  for (const DwellScanRow& row : res.rows) {
    std::printf("%-4d %-18s %-7ld", row.tau, to_string(row.status).c_str(),
                row.counts.total);
    if (row.status == SolveStatus::Optimal)
      std::printf(" %-13s %s\n", fmt(row.objective).c_str(),
                  sys.n == 2 ? fmt(row.area).c_str() : "n/a");
    else
      std::printf(" %-13s %s\n", "-", "-");
  }
  if (res.first_feasible) {
    std::cout << "first feasible dwell time: " << *res.first_feasible << "\n";
    return kExitOk;
  }
  std::cout << "no feasible dwell time up to " << tau_max << "\n";
  return kExitInfeasible;
}

int cmd_baseline(const std::string& system_path,
                 const std::vector<double>& grid, double eps,
                 const std::string& adapter) {
  const SwitchedSystem sys = load_system(system_path);
  if (grid.empty()) {
    std::cerr << "baseline: empty contraction-rate grid\n";
    return kExitError;
  }
  const BaselineScan scan = baseline_analyze(sys, grid, eps, adapter);

  std::cout << "lambda  mu          dwell-bound  r         ball-area\n";
  for (const BaselineResult& r : scan.feasible)
    std::printf("%-7s %-11s %-12d %-9s %s\n", fmt(r.lambda, "%.2f").c_str(),
                fmt(r.mu).c_str(), r.dwell_bound, fmt(r.r).c_str(),
                fmt(r.area).c_str());
  for (double lam : scan.infeasible_lambdas)
    std::printf("%-7s infeasible\n", fmt(lam, "%.2f").c_str());

  if (!scan.best) {
    std::cout << "no feasible contraction rate in the grid\n";
    return kExitInfeasible;
  }
  std::cout << "best: lambda " << fmt(scan.best->lambda, "%.2f")
            << ", dwell bound " << scan.best->dwell_bound << ", ball area "
            << fmt(scan.best->area) << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& system_path, const std::string& cert_path,
                 const std::vector<double>& x0_values,
                 const std::string& schedule_desc, int horizon,
                 const std::string& out_path) {
  const SwitchedSystem sys = load_system(system_path);
  if (static_cast<int>(x0_values.size()) != sys.n)
    throw std::runtime_error("--x0 needs " + std::to_string(sys.n) +
                             " values, got " + std::to_string(x0_values.size()));
  Vector x0(sys.n);
  for (int k = 0; k < sys.n; ++k) x0[k] = x0_values[static_cast<std::size_t>(k)];

  const Schedule sched = parse_schedule(schedule_desc, sys.mode_count(), horizon);

  Certificate cert;
  const Certificate* cert_ptr = nullptr;
  if (!cert_path.empty()) {
    cert = load_certificate(cert_path);
    cert_ptr = &cert;
  }

  const Trajectory traj = simulate(sys, sched, x0, horizon, cert_ptr);
  write_trajectory_csv(traj, out_path);
  std::cout << "wrote " << traj.states.size() << " rows to " << out_path
            << " (final state norm "
            << fmt(traj.states.back().norm(), "%.3e") << ")\n";
  return kExitOk;
}

int cmd_export(const std::string& system_path, const std::string& kind,
               int tau, double lambda, double eps, const std::string& out) {
  const SwitchedSystem sys = load_system(system_path);
  LmiProblem problem;
  if (kind == "saturated")
    problem = build_saturated_dwell(sys, tau, eps);
  else if (kind == "unsaturated")
    problem = build_unsaturated_dwell(sys, tau, eps);
  else
    problem = build_contraction_baseline(sys, lambda, eps);

  export_sdpa(problem, out);
  write_variable_index(problem, out + ".vars.txt");
  const FamilyCounts counts = assembled_counts(problem);
  std::cout << "wrote " << out << " (" << problem.blocks.size() << " blocks, "
            << problem.layout.count() << " scalar variables; families: within "
            << counts.within << ", switching " << counts.switching << ", band "
            << counts.band << ")\n"
            << "variable map: " << out << ".vars.txt\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Domain-of-attraction estimation for switched linear systems with "
      "saturating actuators under dwell-time switching"};
  app.require_subcommand(1);

  std::string system_path;
  std::string adapter;
  double eps = 1e-6;
  app.add_option("--adapter", adapter,
                 "semidefinite-program solver adapter script (default: "
                 "bundled cvxopt adapter; env DOA_SOLVER_ADAPTER)")
      ->envname("DOA_SOLVER_ADAPTER");

  auto* analyze = app.add_subcommand(
      "analyze", "solve the dwell-time certificate problem and export the "
                 "estimated domain of attraction");
  int tau = 2;
  std::string out_dir = ".";
  int samples = 4096;
  analyze->add_option("--system", system_path, "system description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--tau", tau, "dwell time (steps)")
      ->required()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--eps", eps, "strict-inequality margin")
      ->capture_default_str();
  analyze->add_option("--out-dir", out_dir, "artifact directory")
      ->capture_default_str();
  analyze->add_option("--samples", samples, "boundary samples per ellipse")
      ->capture_default_str();

  auto* mindwell = app.add_subcommand(
      "mindwell", "scan dwell times 1..tau-max for the first certifiable one");
  int tau_max = 5;
  mindwell->add_option("--system", system_path, "system description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  mindwell->add_option("--tau-max", tau_max, "largest dwell time to try")
      ->required()
      ->check(CLI::PositiveNumber);
  mindwell->add_option("--eps", eps, "strict-inequality margin")
      ->capture_default_str();

  auto* baseline = app.add_subcommand(
      "baseline", "per-mode contraction comparison method over a grid of "
                  "contraction rates");
  std::vector<double> grid = default_lambda_grid();
  baseline->add_option("--system", system_path, "system description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  baseline->add_option("--lambda-grid", grid,
                       "contraction rates in (0,1) to scan")
      ->capture_default_str();
  baseline->add_option("--eps", eps, "strict-inequality margin")
      ->capture_default_str();

  auto* simulate_cmd =
      app.add_subcommand("simulate", "roll out a trajectory to CSV");
  std::vector<double> x0_values;
  std::string schedule_desc;
  std::string cert_path;
  std::string out_path = "trajectory.csv";
  int horizon = 400;
  simulate_cmd->add_option("--system", system_path, "system description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--x0", x0_values, "initial state components")
      ->required();
  simulate_cmd
      ->add_option("--schedule", schedule_desc,
                   "'periodic:<modes>:<dwell>' (e.g. periodic:2,1:2) or "
                   "'mode:duration,...' with 1-based modes")
      ->required();
  simulate_cmd->add_option("--horizon", horizon, "number of steps")
      ->capture_default_str();
  simulate_cmd->add_option("--certificate", cert_path,
                           "certificate file; attaches a Lyapunov-value column")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", out_path, "output CSV path")
      ->capture_default_str();

  auto* export_cmd = app.add_subcommand(
      "export", "write the optimization problem in SDPA sparse format");
  std::string kind = "saturated";
  double lambda = 0.65;
  std::string export_out = "problem.dat-s";
  export_cmd->add_option("--system", system_path, "system description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--tau", tau, "dwell time (steps)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  export_cmd
      ->add_option("--kind", kind,
                   "problem family: saturated, unsaturated, or baseline")
      ->capture_default_str()
      ->check(CLI::IsMember({"saturated", "unsaturated", "baseline"}));
  export_cmd->add_option("--lambda", lambda,
                         "contraction rate for --kind baseline")
      ->capture_default_str();
  export_cmd->add_option("--eps", eps, "strict-inequality margin")
      ->capture_default_str();
  export_cmd->add_option("--out", export_out, "output path")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*analyze)
      return cmd_analyze(system_path, tau, eps, out_dir, samples, adapter);
    if (*mindwell) return cmd_mindwell(system_path, tau_max, eps, adapter);
    if (*baseline) return cmd_baseline(system_path, grid, eps, adapter);
    if (*simulate_cmd)
      return cmd_simulate(system_path, cert_path, x0_values, schedule_desc,
                          horizon, out_path);
    if (*export_cmd)
      return cmd_export(system_path, kind, tau, lambda, eps, export_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
