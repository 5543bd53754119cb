#pragma once

// Shared fixtures for the test suites: the two-mode benchmark system and the
// reference certificate matrices used for solver-free geometry checks.

#include "doa/model.hpp"

#include <string>

inline doa::SwitchedSystem two_mode_system() {
  doa::SwitchedSystem sys;
  sys.n = 2;
  sys.m = 1;
  doa::Mode m1, m2;
  m1.label = "mode1";
  m1.A.resize(2, 2);
  m1.A << -0.7, 1.0, -0.5, -1.2;
  m1.B.resize(2, 1);
  m1.B << 1.0, 0.0;
  m1.K.resize(1, 2);
  m1.K << 1.1759, 0.1089;
  m2.label = "mode2";
  m2.A.resize(2, 2);
  m2.A << 0.26, -1.0, 1.7, -1.5;
  m2.B.resize(2, 1);
  m2.B << 0.0, -1.0;
  m2.K.resize(1, 2);
  m2.K << 1.5114, -0.7765;
  sys.modes = {m1, m2};
  return sys;
}

// Reference dwell-time-2 certificate (4-decimal matrices) for solver-free
// geometry and validation checks.
inline doa::Matrix reference_P1() {
  doa::Matrix P(2, 2);
  P << 1.0839, 1.5333, 1.5333, 3.1411;
  return P;
}

inline doa::Matrix reference_P2() {
  doa::Matrix P(2, 2);
  P << 1.3408, -0.7720, -0.7720, 1.2585;
  return P;
}

inline doa::Matrix reference_H(int mode, int level) {
  doa::Matrix H(1, 2);
  if (mode == 0 && level == 0) H << 0.8898, 0.7467;
  if (mode == 0 && level == 1) H << 0.5660, 1.5560;
  if (mode == 1 && level == 0) H << 1.1270, -0.8560;
  if (mode == 1 && level == 1) H << -0.3050, -0.4333;
  return H;
}

inline std::string data_file(const std::string& name) {
  return std::string(DOA_DATA_DIR) + "/" + name;
}
