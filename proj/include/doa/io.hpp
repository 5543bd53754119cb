#pragma once

// File interfaces: JSON system descriptions and certificates, CSV trajectory
// and region-boundary exports. All writes are atomic (temp file + rename).

#include "doa/certificate.hpp"
#include "doa/model.hpp"

#include <string>
#include <vector>

namespace doa {

// Reads a JSON system description ({"n", "m", "modes": [{"label", "A", "B",
// "K"}]}), validating dimensions. Throws std::runtime_error with a
// diagnostic naming the offending mode/matrix on malformed input.
SwitchedSystem load_system(const std::string& path);
void save_system(const SwitchedSystem& sys, const std::string& path);

void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);

// CSV rows `t,x1..xn,mode`; a trailing `V` column when the trajectory carries
// Lyapunov values. Modes are written 1-based.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// CSV rows `theta,x1,x2` sampling one ellipse boundary.
void write_ellipse_boundary_csv(const Matrix& P, int samples,
                                const std::string& path);

// CSV rows `x1,x2`: vertex list of the intersection polygon.
void write_region_boundary_csv(const std::vector<Matrix>& Ps, int samples,
                               const std::string& path);

void atomic_write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace doa
