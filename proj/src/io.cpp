#include "doa/io.hpp"

#include "doa/geometry.hpp"

#include <json.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace doa {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int rows, int cols,
                        const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw std::runtime_error(what + ": expected " + std::to_string(rows) +
                             " rows, got " +
                             (j.is_array() ? std::to_string(j.size())
                                           : std::string("non-array")));
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::runtime_error(what + " row " + std::to_string(r + 1) +
                               ": expected " + std::to_string(cols) +
                               " entries");
    for (int c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw std::runtime_error(what + " entry (" + std::to_string(r + 1) +
                                 "," + std::to_string(c + 1) +
                                 ") is not a number");
      M(r, c) = v.get<double>();
    }
  }
  return M;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

}  // namespace

SwitchedSystem load_system(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("n") || !j.contains("m") || !j.contains("modes"))
    throw std::runtime_error(path + ": missing \"n\", \"m\" or \"modes\"");
  SwitchedSystem sys;
  sys.n = j.at("n").get<int>();
  sys.m = j.at("m").get<int>();
  if (sys.n < 1 || sys.m < 1)
    throw std::runtime_error(path + ": n and m must be positive");
  const json& modes = j.at("modes");
  if (!modes.is_array() || modes.empty())
    throw std::runtime_error(path + ": \"modes\" must be a non-empty array");
  int idx = 0;
  for (const json& jm : modes) {
    ++idx;
    const std::string where = path + ", mode " + std::to_string(idx);
    Mode mode;
    mode.label = jm.value("label", "mode" + std::to_string(idx));
    mode.A = matrix_from_json(jm.at("A"), sys.n, sys.n, where + ", A");
    mode.B = matrix_from_json(jm.at("B"), sys.n, sys.m, where + ", B");
    mode.K = matrix_from_json(jm.at("K"), sys.m, sys.n, where + ", K");
    sys.modes.push_back(std::move(mode));
  }
  sys.validate();
  return sys;
}

void save_system(const SwitchedSystem& sys, const std::string& path) {
  json j;
  j["n"] = sys.n;
  j["m"] = sys.m;
  j["modes"] = json::array();
  for (const Mode& mode : sys.modes) {
    json jm;
    jm["label"] = mode.label;
    jm["A"] = matrix_to_json(mode.A);
    jm["B"] = matrix_to_json(mode.B);
    jm["K"] = matrix_to_json(mode.K);
    j["modes"].push_back(std::move(jm));
  }
  atomic_write_text(path, j.dump(2) + "\n");
}

void save_certificate(const Certificate& cert, const std::string& path) {
  json j;
  j["tau"] = cert.tau;
  j["objective"] = cert.objective;
  j["P"] = json::array();
  for (const Matrix& P : cert.P) j["P"].push_back(matrix_to_json(P));
  j["H"] = json::array();
  for (const std::vector<Matrix>& per_mode : cert.H) {
    json levels = json::array();
    for (const Matrix& H : per_mode) levels.push_back(matrix_to_json(H));
    j["H"].push_back(std::move(levels));
  }
  atomic_write_text(path, j.dump(2) + "\n");
}

Certificate load_certificate(const std::string& path) {
  const json j = parse_file(path);
  for (const char* key : {"tau", "P", "H"})
    if (!j.contains(key))
      throw std::runtime_error(path + ": missing \"" + key + "\"");
  Certificate cert;
  cert.tau = j.at("tau").get<int>();
  cert.objective = j.value("objective", 0.0);
  if (cert.tau < 1) throw std::runtime_error(path + ": tau must be >= 1");
  const json& jp = j.at("P");
  if (!jp.is_array() || jp.empty())
    throw std::runtime_error(path + ": \"P\" must be a non-empty array");
  const int n = static_cast<int>(jp[0].size());
  int i = 0;
  for (const json& m : jp) {
    ++i;
    cert.P.push_back(matrix_from_json(m, n, n, path + ", P " + std::to_string(i)));
  }
  const json& jh = j.at("H");
  if (!jh.is_array() || jh.size() != jp.size())
    throw std::runtime_error(path + ": \"H\" must list one entry per mode");
  i = 0;
  for (const json& per_mode : jh) {
    ++i;
    if (!per_mode.is_array() || static_cast<int>(per_mode.size()) != cert.tau)
      throw std::runtime_error(path + ", H " + std::to_string(i) +
                               ": expected tau = " + std::to_string(cert.tau) +
                               " gains");
    std::vector<Matrix> levels;
    int lev = 0;
    for (const json& mh : per_mode) {
      ++lev;
      const int m_rows = static_cast<int>(mh.size());
      levels.push_back(matrix_from_json(mh, m_rows, n,
                                        path + ", H " + std::to_string(i) +
                                            " level " + std::to_string(lev)));
    }
    cert.H.push_back(std::move(levels));
  }
  return cert;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  const bool with_v = !traj.lyapunov.empty();
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  std::ostringstream out;
  out << "t";
  for (int k = 1; k <= n; ++k) out << ",x" << k;
  out << ",mode";
  if (with_v) out << ",V";
  out << "\n";
  char buf[64];
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (int k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.states[t][k]);
      out << ',' << buf;
    }
    out << ',' << (traj.schedule.mode_at(static_cast<int>(t)) + 1);
    if (with_v) {
      std::snprintf(buf, sizeof buf, "%.17g", traj.lyapunov[t]);
      out << ',' << buf;
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

void write_ellipse_boundary_csv(const Matrix& P, int samples,
                                const std::string& path) {
  const std::vector<Eigen::Vector2d> pts = ellipse_boundary(P, samples);
  std::ostringstream out;
  out << "theta,x1,x2\n";
  char buf[160];
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double theta =
        2.0 * M_PI * static_cast<double>(k) / static_cast<double>(pts.size());
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", theta, pts[k].x(),
                  pts[k].y());
    out << buf;
  }
  atomic_write_text(path, out.str());
}

void write_region_boundary_csv(const std::vector<Matrix>& Ps, int samples,
                               const std::string& path) {
  const std::vector<Eigen::Vector2d> poly = intersection_polygon(Ps, samples);
  std::ostringstream out;
  out << "x1,x2\n";
  char buf[120];
  for (const Eigen::Vector2d& p : poly) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x(), p.y());
    out << buf;
  }
  atomic_write_text(path, out.str());
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir =
      target.has_parent_path() ? target.parent_path() : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / (target.filename().string() + ".tmp-XXXXXX");
  std::string tmpl = tmp.string();
  // mkstemp wants a mutable template and gives us an already-open fd.
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) throw std::runtime_error("cannot create temp file near " + path);
  {
    std::ofstream out(tmpl, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      ::close(fd);
      fs::remove(tmpl);
      throw std::runtime_error("write failed for " + path);
    }
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(tmpl, target, ec);
  if (ec) {
    fs::remove(tmpl);
    throw std::runtime_error("rename failed for " + path + ": " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace doa
