#pragma once

// Geometry of the estimated domain of attraction: ellipsoid membership,
// gain-band containment, 2-D intersection areas, the minimal-dwell-time scan,
// and the contraction-baseline post-processing (mu, dwell bound, inscribed
// ball).

#include "doa/certificate.hpp"
#include "doa/lmi.hpp"
#include "doa/model.hpp"
#include "doa/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace doa {

// x' P x <= 1 + tol.
bool ellipsoid_contains(const Matrix& P, const Vector& x, double tol);

// Per-row margins 1 - h P^{-1} h' for h = rows of H; non-negative iff the
// ellipsoid {x' P x <= 1} lies inside the band {|H x|_inf <= 1}.
Vector band_containment_margins(const Matrix& P, const Matrix& H);

// Closed-form area of {x' P x <= 1} in 2-D: pi / sqrt(det P).
double single_ellipse_area(const Matrix& P);

// Boundary polygon of {x' P x <= 1}, counter-clockwise, `samples` vertices.
std::vector<Eigen::Vector2d> ellipse_boundary(const Matrix& P, int samples);

// Vertices of the intersection of the ellipses (convex polygon clipping).
std::vector<Eigen::Vector2d> intersection_polygon(const std::vector<Matrix>& Ps,
                                                  int samples = 4096);

// Area of the intersection of 2-D ellipsoids via boundary polygons and
// convex clipping. Throws std::invalid_argument unless all P are 2x2.
double intersection_area(const std::vector<Matrix>& Ps, int samples = 4096);

struct DwellScanRow {
  int tau = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  double area = 0.0;  // 2-D only; 0 when not solved/recovered
  FamilyCounts counts;
  std::optional<Certificate> certificate;
};

struct MinDwellResult {
  std::optional<int> first_feasible;
  std::vector<DwellScanRow> rows;  // tau = 1..tau_max in order
};

// Linear scan tau = 1..tau_max of the saturated dwell-time problem. With
// stop_at_first the scan ends at the first feasible tau.
MinDwellResult min_dwell_search(const SwitchedSystem& sys, int tau_max,
                                double eps, bool stop_at_first = false,
                                const std::string& adapter_path = "");

struct BaselineResult {
  double lambda = 0.0;
  std::vector<Matrix> P;  // per mode
  std::vector<Matrix> H;  // per mode (single gain each)
  double mu = 0.0;        // max over ordered pairs of eigmax(P_i)/eigmin(P_j)
  int dwell_bound = 0;    // largest integer below -ln(mu)/ln(lambda)
  double r = 0.0;         // min_i 1/sqrt(eigmax(P_i))
  double area = 0.0;      // pi r^2
};

struct BaselineScan {
  std::vector<BaselineResult> feasible;      // per feasible grid point, in grid order
  std::optional<BaselineResult> best;        // min dwell_bound, ties -> larger area
  std::vector<double> infeasible_lambdas;
};

// Solves the contraction baseline on every grid point and post-processes.
BaselineScan baseline_analyze(const SwitchedSystem& sys,
                              const std::vector<double>& lambda_grid,
                              double eps,
                              const std::string& adapter_path = "");

// Among grid points whose dwell bound is <= tau, the one with largest area.
std::optional<BaselineResult> best_for_dwell(const BaselineScan& scan, int tau);

// The floor convention used by the dwell bound: largest integer strictly
// below a (so 5.0 -> 4, 5.3 -> 5).
int largest_integer_below(double a);

// {0.50, 0.55, ..., 0.95, 0.99}.
std::vector<double> default_lambda_grid();

}  // namespace doa
