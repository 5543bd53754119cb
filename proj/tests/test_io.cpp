#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doa/io.hpp"
#include "doa/model.hpp"

#include "helpers.hpp"

#include <filesystem>
#include <sstream>
#include <stdexcept>

using namespace doa;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("the bundled system description loads with the expected entries") {
  const SwitchedSystem sys = load_system(data_file("two_mode_saturated.json"));
  CHECK(sys.n == 2);
  CHECK(sys.m == 1);
  REQUIRE(sys.mode_count() == 2);
  CHECK(sys.modes[0].A(0, 0) == -0.7);
  CHECK(sys.modes[0].K(0, 0) == 1.1759);
  CHECK(sys.modes[1].B(1, 0) == -1.0);
  CHECK(sys.modes[1].label == "mode2");

  const SwitchedSystem ref = two_mode_system();
  for (int i = 0; i < 2; ++i) {
    CHECK((sys.modes[i].A - ref.modes[i].A).norm() == 0.0);
    CHECK((sys.modes[i].B - ref.modes[i].B).norm() == 0.0);
    CHECK((sys.modes[i].K - ref.modes[i].K).norm() == 0.0);
  }
}

TEST_CASE("system descriptions round-trip through save and load") {
  const SwitchedSystem sys = two_mode_system();
  const std::string path = temp_path("doa_test_system.json");
  save_system(sys, path);
  const SwitchedSystem back = load_system(path);
  CHECK(back.n == sys.n);
  CHECK(back.m == sys.m);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.modes[i].A - sys.modes[i].A).norm() == 0.0);
    CHECK(back.modes[i].label == sys.modes[i].label);
  }
  std::filesystem::remove(path);
}

TEST_CASE("malformed system files fail with a pointed diagnostic") {
  const std::string path = temp_path("doa_test_bad_system.json");
  atomic_write_text(path, R"({
    "n": 2, "m": 1,
    "modes": [
      {"A": [[1, 0], [0, 1]], "B": [[1], [0]], "K": [[0.1, 0.2]]},
      {"A": [[1, 0], [0, 1]], "B": [[1]], "K": [[0.1, 0.2]]}
    ]
  })");
  CHECK_THROWS_AS(load_system(path), std::runtime_error);
  try {
    load_system(path);
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("mode 2") != std::string::npos);
    CHECK(msg.find("B") != std::string::npos);
  }
  atomic_write_text(path, "{ not json");
  CHECK_THROWS_AS(load_system(path), std::runtime_error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_system(path), std::runtime_error);  // missing file
}

TEST_CASE("certificates round-trip through save and load") {
  Certificate cert;
  cert.tau = 2;
  cert.objective = 6.5;
  cert.P = {reference_P1(), reference_P2()};
  cert.H = {{reference_H(0, 0), reference_H(0, 1)},
            {reference_H(1, 0), reference_H(1, 1)}};
  const std::string path = temp_path("doa_test_cert.json");
  save_certificate(cert, path);
  const Certificate back = load_certificate(path);
  CHECK(back.tau == 2);
  CHECK(back.objective == 6.5);
  REQUIRE(back.P.size() == 2);
  REQUIRE(back.H.size() == 2);
  REQUIRE(back.H[1].size() == 2);
  CHECK((back.P[0] - cert.P[0]).norm() == 0.0);
  CHECK((back.H[1][1] - cert.H[1][1]).norm() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("certificate files with missing pieces are rejected") {
  const std::string path = temp_path("doa_test_cert_bad.json");
  atomic_write_text(path, R"({"tau": 2, "P": [[[1, 0], [0, 1]]]})");
  CHECK_THROWS_AS(load_certificate(path), std::runtime_error);
  atomic_write_text(
      path, R"({"tau": 2, "P": [[[1, 0], [0, 1]]], "H": [[[[0.1, 0.2]]]]})");
  // One gain level for a two-level certificate.
  CHECK_THROWS_AS(load_certificate(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("trajectory CSV layout") {
  const SwitchedSystem sys = two_mode_system();
  const Schedule sched = periodic_schedule({1, 0}, 2, 6);
  Vector x0(2);
  x0 << 0.2, -0.1;
  const std::string path = temp_path("doa_test_traj.csv");

  const Trajectory plain = simulate(sys, sched, x0, 6);
  write_trajectory_csv(plain, path);
  std::string text = read_text(path);
  CHECK(text.rfind("t,x1,x2,mode\n", 0) == 0);
  CHECK(count_lines(text) == 8);  // header + 7 states
  CHECK(text.find("0,0.2") != std::string::npos);
  CHECK(text.find(",2\n") != std::string::npos);  // 1-based mode column

  Certificate cert;
  cert.tau = 2;
  cert.P = {reference_P1(), reference_P2()};
  cert.H = {{reference_H(0, 0), reference_H(0, 1)},
            {reference_H(1, 0), reference_H(1, 1)}};
  const Trajectory with_v = simulate(sys, sched, x0, 6, &cert);
  write_trajectory_csv(with_v, path);
  text = read_text(path);
  CHECK(text.rfind("t,x1,x2,mode,V\n", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("boundary CSV layout") {
  const std::string path = temp_path("doa_test_boundary.csv");
  write_ellipse_boundary_csv(reference_P1(), 128, path);
  std::string text = read_text(path);
  CHECK(text.rfind("theta,x1,x2\n", 0) == 0);
  CHECK(count_lines(text) == 129);

  write_region_boundary_csv({reference_P1(), reference_P2()}, 512, path);
  text = read_text(path);
  CHECK(text.rfind("x1,x2\n", 0) == 0);
  CHECK(count_lines(text) > 100);
  std::filesystem::remove(path);
}

TEST_CASE("atomic writes leave no temporaries behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "doa_test_atomic";
  fs::remove_all(dir);
  const std::string target = (dir / "nested" / "out.txt").string();
  atomic_write_text(target, "payload\n");
  CHECK(read_text(target) == "payload\n");
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "nested")) {
    (void)entry;
    ++files;
  }
  CHECK(files == 1);
  atomic_write_text(target, "replaced\n");
  CHECK(read_text(target) == "replaced\n");
  fs::remove_all(dir);
}
