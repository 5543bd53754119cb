#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doa/geometry.hpp"

#include "helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace doa;

TEST_CASE("ellipsoid membership respects the tolerance") {
  const Matrix P = Matrix::Identity(2, 2);
  Vector x(2);
  x << 0.9, 0.0;
  CHECK(ellipsoid_contains(P, x, 0.0));
  x << 1.1, 0.0;
  CHECK_FALSE(ellipsoid_contains(P, x, 0.0));
  CHECK(ellipsoid_contains(P, x, 0.25));  // 1.21 <= 1.25
}

TEST_CASE("the sampled area of one ellipse matches the closed form") {
  CHECK(single_ellipse_area(Matrix::Identity(2, 2)) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(intersection_area({Matrix::Identity(2, 2)}) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-4));

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix R(2, 2);
    R << uni(gen) + 2.0, uni(gen), uni(gen), uni(gen) + 2.0;
    const Matrix P = R.transpose() * R;  // random SPD
    const double exact = single_ellipse_area(P);
    CHECK(intersection_area({P}) == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("identical ellipses intersect to themselves") {
  const Matrix P = reference_P1();
  const double alone = intersection_area({P});
  const double doubled = intersection_area({P, P});
  CHECK(doubled == doctest::Approx(alone).epsilon(1e-6));
}

TEST_CASE("reference certificate geometry") {
  const double area1 = single_ellipse_area(reference_P1());
  CHECK(area1 == doctest::Approx(3.0607).epsilon(1e-3));

  const double region = intersection_area({reference_P1(), reference_P2()});
  CHECK(region == doctest::Approx(1.37187).epsilon(0.002));

  // Within-band containment of both reference ellipsoids; the 4-decimal
  // rounding of the reference matrices costs at most ~1e-3.
  Matrix H1(2, 2), H2(2, 2);
  H1.row(0) = reference_H(0, 0);
  H1.row(1) = reference_H(0, 1);
  H2.row(0) = reference_H(1, 0);
  H2.row(1) = reference_H(1, 1);
  CHECK(band_containment_margins(reference_P1(), H1).minCoeff() >= -1e-3);
  CHECK(band_containment_margins(reference_P2(), H2).minCoeff() >= -1e-3);
}

TEST_CASE("band margins have the closed form 1 - h P^-1 h'") {
  Matrix H(1, 2);
  H << 0.5, 0.0;
  const Vector margins = band_containment_margins(Matrix::Identity(2, 2), H);
  REQUIRE(margins.size() == 1);
  CHECK(margins[0] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("the area estimate converges in the sample count") {
  const std::vector<Matrix> Ps = {reference_P1(), reference_P2()};
  const double coarse = intersection_area(Ps, 2048);
  const double fine = intersection_area(Ps, 8192);
  CHECK(std::abs(coarse - fine) / fine < 1e-3);
}

TEST_CASE("ellipse boundaries are counter-clockwise") {
  for (const Matrix& P : {reference_P1(), reference_P2()}) {
    const auto pts = ellipse_boundary(P, 256);
    REQUIRE(pts.size() == 256);
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      const auto& q = pts[(i + 1) % pts.size()];
      twice += p.x() * q.y() - q.x() * p.y();
    }
    CHECK(twice > 0.0);  // signed area positive <=> CCW
    // Every sample lies on the unit level set.
    for (const auto& pt : pts) {
      const Vector x = pt;
      CHECK(x.dot(P * x) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("only 2-D regions are supported") {
  CHECK_THROWS_AS(intersection_area({Matrix::Identity(3, 3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(intersection_polygon({}), std::invalid_argument);
  CHECK_THROWS_AS(single_ellipse_area(Matrix::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("the dwell-bound floor takes the largest integer strictly below") {
  CHECK(largest_integer_below(5.0) == 4);
  CHECK(largest_integer_below(5.3) == 5);
  CHECK(largest_integer_below(0.7) == 0);
  CHECK(largest_integer_below(1.0) == 0);
  CHECK(largest_integer_below(-0.2) == -1);
}

TEST_CASE("the default contraction-rate grid") {
  const std::vector<double> g = default_lambda_grid();
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 0.50);
  CHECK(g[9] == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(g.back() == 0.99);
}

TEST_CASE("best-for-dwell picks the largest area within the bound") {
  BaselineScan scan;
  BaselineResult a, b, c;
  a.lambda = 0.60;
  a.dwell_bound = 5;
  a.area = 0.9;
  b.lambda = 0.65;
  b.dwell_bound = 5;
  b.area = 1.3;
  c.lambda = 0.75;
  c.dwell_bound = 8;
  c.area = 2.5;
  scan.feasible = {a, b, c};
  const auto at5 = best_for_dwell(scan, 5);
  REQUIRE(at5.has_value());
  CHECK(at5->lambda == 0.65);
  const auto at8 = best_for_dwell(scan, 8);
  REQUIRE(at8.has_value());
  CHECK(at8->area == 2.5);
  CHECK_FALSE(best_for_dwell(scan, 4).has_value());
}
