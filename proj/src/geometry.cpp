#include "doa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doa {

bool ellipsoid_contains(const Matrix& P, const Vector& x, double tol) {
  return x.dot(P * x) <= 1.0 + tol;
}

Vector band_containment_margins(const Matrix& P, const Matrix& H) {
  const Matrix Pinv = P.inverse();
  Vector margins(H.rows());
  for (int j = 0; j < H.rows(); ++j) {
    const Vector h = H.row(j).transpose();
    margins[j] = 1.0 - h.dot(Pinv * h);
  }
  return margins;
}

double single_ellipse_area(const Matrix& P) {
  if (P.rows() != 2 || P.cols() != 2)
    throw std::invalid_argument("single_ellipse_area: 2x2 matrix required");
  return std::numbers::pi / std::sqrt(P.determinant());
}

std::vector<Eigen::Vector2d> ellipse_boundary(const Matrix& P, int samples) {
  if (P.rows() != 2 || P.cols() != 2)
    throw std::invalid_argument("ellipse_boundary: 2x2 matrix required");
  if (samples < 3)
    throw std::invalid_argument("ellipse_boundary: need at least 3 samples");
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  Matrix U = es.eigenvectors();
  // Force an orientation-preserving basis so the boundary comes out
  // counter-clockwise (the clipping step depends on it).
  if (U.determinant() < 0) U.col(1) *= -1.0;
  const Matrix map = U * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * std::numbers::pi * k / samples;
    pts.emplace_back(map * Eigen::Vector2d(std::cos(th), std::sin(th)));
  }
  return pts;
}

namespace {

// Clips `subject` against one directed edge a->b of a convex CCW clipper.
std::vector<Eigen::Vector2d> clip_edge(const std::vector<Eigen::Vector2d>& subject,
                                       const Eigen::Vector2d& a,
                                       const Eigen::Vector2d& b) {
  auto inside = [&](const Eigen::Vector2d& p) {
    return (b.x() - a.x()) * (p.y() - a.y()) -
               (b.y() - a.y()) * (p.x() - a.x()) >=
           0.0;
  };
  auto intersect = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    const Eigen::Vector2d d1 = q - p, d2 = b - a;
    const double denom = d1.x() * d2.y() - d1.y() * d2.x();
    const double s =
        ((a.x() - p.x()) * d2.y() - (a.y() - p.y()) * d2.x()) / denom;
    return Eigen::Vector2d(p + s * d1);
  };
  std::vector<Eigen::Vector2d> out;
  const std::size_t n = subject.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& cur = subject[i];
    const Eigen::Vector2d& prev = subject[(i + n - 1) % n];
    const bool cur_in = inside(cur), prev_in = inside(prev);
    if (cur_in) {
      if (!prev_in) out.push_back(intersect(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(intersect(prev, cur));
    }
  }
  return out;
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

std::vector<Eigen::Vector2d> intersection_polygon(const std::vector<Matrix>& Ps,
                                                  int samples) {
  if (Ps.empty())
    throw std::invalid_argument("intersection_polygon: empty matrix list");
  std::vector<Eigen::Vector2d> poly = ellipse_boundary(Ps[0], samples);
  for (std::size_t i = 1; i < Ps.size() && !poly.empty(); ++i) {
    const auto clipper = ellipse_boundary(Ps[i], samples);
    for (std::size_t k = 0; k < clipper.size() && !poly.empty(); ++k)
      poly = clip_edge(poly, clipper[k], clipper[(k + 1) % clipper.size()]);
  }
  return poly;
}

double intersection_area(const std::vector<Matrix>& Ps, int samples) {
  for (const auto& P : Ps)
    if (P.rows() != 2 || P.cols() != 2)
      throw std::invalid_argument(
          "intersection_area: only 2-D regions are supported");
  const auto poly = intersection_polygon(Ps, samples);
  return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

MinDwellResult min_dwell_search(const SwitchedSystem& sys, int tau_max,
                                double eps, bool stop_at_first,
                                const std::string& adapter_path) {
  if (tau_max < 1)
    throw std::invalid_argument("min_dwell_search: tau_max >= 1");
  MinDwellResult res;
  for (int tau = 1; tau <= tau_max; ++tau) {
    DwellScanRow row;
    row.tau = tau;
    row.counts = count_constraints(sys.mode_count(), sys.m, sys.n, tau);
    const LmiProblem p = build_saturated_dwell(sys, tau, eps);
    const SdpSolution sol = solve(p, adapter_path);
    row.status = sol.status;
    row.objective = sol.objective;
    if (sol.status == SolveStatus::Optimal) {
      row.certificate = recover_certificate(p, sol);
      if (sys.n == 2) row.area = intersection_area(row.certificate->P);
      if (!res.first_feasible) res.first_feasible = tau;
    }
    res.rows.push_back(std::move(row));
    if (stop_at_first && res.first_feasible) break;
  }
  return res;
}

int largest_integer_below(double a) {
  const double f = std::floor(a);
  return static_cast<int>(f == a ? f - 1.0 : f);
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 9; ++k) g.push_back(0.50 + 0.05 * k);
  g.push_back(0.99);
  return g;
}

BaselineScan baseline_analyze(const SwitchedSystem& sys,
                              const std::vector<double>& lambda_grid,
                              double eps, const std::string& adapter_path) {
  if (lambda_grid.empty())
    throw std::invalid_argument("baseline_analyze: empty lambda grid");
  BaselineScan scan;
  for (double lambda : lambda_grid) {
    const LmiProblem p = build_contraction_baseline(sys, lambda, eps);
    const SdpSolution sol = solve(p, adapter_path);
    if (sol.status != SolveStatus::Optimal) {
      scan.infeasible_lambdas.push_back(lambda);
      continue;
    }
    const Certificate cert = recover_certificate(p, sol);
    BaselineResult r;
    r.lambda = lambda;
    r.P = cert.P;
    for (const auto& Hi : cert.H) r.H.push_back(Hi.front());
    double mu = 0.0;
    std::vector<double> eig_min, eig_max;
    for (const auto& P : r.P) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(P);
      eig_min.push_back(es.eigenvalues().minCoeff());
      eig_max.push_back(es.eigenvalues().maxCoeff());
    }
    for (std::size_t i = 0; i < r.P.size(); ++i)
      for (std::size_t j = 0; j < r.P.size(); ++j)
        mu = std::max(mu, eig_max[i] / eig_min[j]);
    r.mu = mu;
    r.dwell_bound = largest_integer_below(-std::log(mu) / std::log(lambda));
    r.r = 1.0 / std::sqrt(*std::max_element(eig_max.begin(), eig_max.end()));
    r.area = std::numbers::pi * r.r * r.r;
    scan.feasible.push_back(std::move(r));
  }
  for (const auto& r : scan.feasible) {
    if (!scan.best || r.dwell_bound < scan.best->dwell_bound ||
        (r.dwell_bound == scan.best->dwell_bound && r.area > scan.best->area))
      scan.best = r;
  }
  return scan;
}

std::optional<BaselineResult> best_for_dwell(const BaselineScan& scan, int tau) {
  std::optional<BaselineResult> best;
  for (const auto& r : scan.feasible)
    if (r.dwell_bound <= tau && (!best || r.area > best->area)) best = r;
  return best;
}

}  // namespace doa
