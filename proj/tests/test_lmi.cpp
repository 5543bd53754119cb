#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doa/lmi.hpp"

#include "helpers.hpp"

#include <random>
#include <stdexcept>

using namespace doa;

TEST_CASE("constraint-family counts match the closed form") {
  // Benchmark system shape: 2 modes, 1 input, 2 states.
  const long expected_total[] = {16, 26, 44, 78};
  for (int tau = 2; tau <= 5; ++tau) {
    const FamilyCounts c = count_constraints(2, 1, 2, tau);
    CHECK(c.within == 4);
    CHECK(c.switching == 2L << tau);
    CHECK(c.band == 2L * tau);
    CHECK(c.total == expected_total[tau - 2]);
  }
  CHECK(count_constraints(2, 1, 2, 8).total == 532);

  const FamilyCounts g = count_constraints(3, 2, 4, 2);
  CHECK(g.within == 3 * 4);
  CHECK(g.switching == 3 * 2 * 16);
  CHECK(g.band == 3 * 2 * 2);

  CHECK_THROWS_AS(count_constraints(0, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(count_constraints(1, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("assembled problems match the counted families") {
  const SwitchedSystem sys = two_mode_system();
  for (int tau : {1, 2, 3, 8}) {
    const LmiProblem p = build_saturated_dwell(sys, tau, 1e-6);
    const FamilyCounts counted = count_constraints(2, 1, 2, tau);
    const FamilyCounts assembled = assembled_counts(p);
    CHECK(assembled.within == counted.within);
    CHECK(assembled.switching == counted.switching);
    CHECK(assembled.band == counted.band);
    CHECK(assembled.total == counted.total);
    // Positivity blocks exist but are not a counted family.
    CHECK(static_cast<long>(p.blocks.size()) == counted.total + 2);
  }
}

TEST_CASE("block shapes and kinds follow the formulation") {
  const SwitchedSystem sys = two_mode_system();
  const LmiProblem p = build_saturated_dwell(sys, 2, 1e-6);
  for (const BlockConstraint& b : p.blocks) {
    if (b.tag.rfind("positivity", 0) == 0) {
      CHECK(b.size == 2);
      CHECK(b.kind == BlockKind::StrictPd);
    } else if (b.tag.rfind("within-mode", 0) == 0 ||
               b.tag.rfind("switch", 0) == 0) {
      CHECK(b.size == 4);
      CHECK(b.kind == BlockKind::StrictPd);
    } else if (b.tag.rfind("band", 0) == 0) {
      CHECK(b.size == 3);
      CHECK(b.kind == BlockKind::Psd);
      CHECK(b.constant(0, 0) == 1.0);
    } else {
      FAIL("unexpected block tag: ", b.tag);
    }
  }
}

TEST_CASE("every block evaluates to a symmetric matrix") {
  const SwitchedSystem sys = two_mode_system();
  const LmiProblem p = build_saturated_dwell(sys, 3, 1e-6);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> x(static_cast<std::size_t>(p.layout.count()));
    for (double& v : x) v = uni(gen);
    for (const BlockConstraint& b : p.blocks) {
      const Matrix M = evaluate_block(b, x);
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(M.rows() == b.size);
    }
  }
}

TEST_CASE("variable layout indices invert cleanly") {
  const VariableLayout layout{2, 3, 2, 3};
  CHECK(layout.tri_count() == 6);
  CHECK(layout.per_mode() == 6 + 3 * 2 * 3);
  for (int v = 0; v < layout.count(); ++v) {
    const auto e = layout.describe(v);
    if (e.kind == 'Q') {
      CHECK(e.level == -1);
      CHECK(layout.q_index(e.mode, e.row, e.col) == v);
      CHECK(e.row <= e.col);
    } else {
      CHECK(e.kind == 'Y');
      CHECK(layout.y_index(e.mode, e.level, e.row, e.col) == v);
    }
  }
  // Symmetric entry addressing: (r,c) and (c,r) share a scalar.
  CHECK(layout.q_index(1, 2, 0) == layout.q_index(1, 0, 2));
}

TEST_CASE("the objective is the sum of matrix-variable traces") {
  const SwitchedSystem sys = two_mode_system();
  const LmiProblem p = build_saturated_dwell(sys, 2, 1e-6);
  REQUIRE(static_cast<int>(p.objective.size()) == p.layout.count());
  double sum = 0.0;
  for (double c : p.objective) {
    CHECK((c == 0.0 || c == 1.0));
    sum += c;
  }
  CHECK(sum == 4.0);  // N * n diagonal entries
  CHECK(p.objective[static_cast<std::size_t>(p.layout.q_index(0, 0, 0))] == 1.0);
  CHECK(p.objective[static_cast<std::size_t>(p.layout.q_index(1, 1, 1))] == 1.0);
  CHECK(p.objective[static_cast<std::size_t>(p.layout.q_index(0, 0, 1))] == 0.0);
}

TEST_CASE("the unsaturated problem is a pure feasibility test over P") {
  const SwitchedSystem sys = two_mode_system();
  const LmiProblem p = build_unsaturated_dwell(sys, 2, 1e-6);
  CHECK(p.variable_symbol == 'P');
  CHECK(p.layout.levels == 0);
  CHECK(p.layout.count() == 6);
  CHECK(p.objective.empty());
  const FamilyCounts c = assembled_counts(p);
  CHECK(c.within == 2);
  CHECK(c.switching == 2);
  CHECK(c.band == 0);
  // positivity (2) + within (2) + switching (2) + normalization (1)
  CHECK(p.blocks.size() == 7);
  bool has_norm = false;
  for (const auto& b : p.blocks) has_norm = has_norm || b.tag == "normalization";
  CHECK(has_norm);
}

TEST_CASE("the contraction baseline has one gain level and no switching family") {
  const SwitchedSystem sys = two_mode_system();
  const LmiProblem p = build_contraction_baseline(sys, 0.65, 1e-6);
  CHECK(p.layout.levels == 1);
  const FamilyCounts c = assembled_counts(p);
  CHECK(c.within == 4);  // N * 2^m vertices
  CHECK(c.switching == 0);
  CHECK(c.band == 2);  // N * m rows
  CHECK_THROWS_AS(build_contraction_baseline(sys, 1.0, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_contraction_baseline(sys, 0.0, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("builders reject invalid arguments") {
  const SwitchedSystem sys = two_mode_system();
  CHECK_THROWS_AS(build_saturated_dwell(sys, 0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(build_saturated_dwell(sys, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_unsaturated_dwell(sys, 0, 1e-6), std::invalid_argument);
}
