#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "helpers.hpp"
#include "marchetype/oracle.hpp"
#include "marchetype/targeting.hpp"

using namespace marchetype;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TargetingInstance tiny_instance(Index n_customers, Index n_actions, std::vector<double> profits,
                                std::vector<Index> segments, Index cap = -1) {
  TargetingInstance inst;
  inst.n_customers = n_customers;
  inst.n_actions = n_actions;
  inst.profits = std::move(profits);
  inst.constraint_segment_of = segments;
  inst.action_segment_of = std::move(segments);
  inst.max_actions.assign(static_cast<std::size_t>(n_customers), cap < 0 ? 1 : cap);
  inst.recompute_segment_sizes();
  return inst;
}

// Menu covering every family in the given shape, for row-count checks.
ConstraintMenu dense_menu(const TargetingInstance& instance, const MenuShape& shape) {
  const Index K = instance.n_segments();
  const Index J = instance.n_actions;
  const Index I = instance.n_customers;
  ConstraintMenu menu;
  if (shape.volume1) {
    std::vector<VolumeIEntry> v1;
    for (Index k = 0; k < K; ++k) {
      double n_k = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(k)]);
      for (Index j = 0; j < J; ++j) v1.push_back({k, j, 0.0, n_k});
    }
    menu.volume1 = std::move(v1);
  }
  if (shape.volume2_sides > 0) {
    VolumeII v2;
    v2.lower.assign(static_cast<std::size_t>(K), 0.0);
    v2.upper.assign(static_cast<std::size_t>(K),
                    shape.volume2_sides == 2 ? static_cast<double>(I * J) : kInf);
    v2.weights.assign(static_cast<std::size_t>(I * J), 1.0);
    menu.volume2 = std::move(v2);
  }
  if (shape.similarity1 && K > 1) {
    std::vector<SimilarityIEntry> s1;
    for (Index k1 = 0; k1 < K; ++k1) {
      for (Index k2 = shape.ordered_pairs ? 0 : k1 + 1; k2 < K; ++k2) {
        if (k1 == k2) continue;
        for (Index j = 0; j < J; ++j) s1.push_back({j, k1, k2, 1.2, 0.01});
      }
    }
    menu.similarity1 = std::move(s1);
  }
  if (shape.similarity2 && K > 1) {
    SimilarityII s2;
    s2.weights.assign(static_cast<std::size_t>(I * J), 1.0);
    for (Index k1 = 0; k1 < K; ++k1) {
      for (Index k2 = shape.ordered_pairs ? 0 : k1 + 1; k2 < K; ++k2) {
        if (k1 == k2) continue;
        s2.pairs.push_back({k1, k2, 1.2, 0.01});
      }
    }
    menu.similarity2 = std::move(s2);
  }
  menu.targeting_enabled = shape.targeting;
  return menu;
}

}  // namespace

TEST_CASE("single customer, single action compiles to min -5x with x <= 1") {
  TargetingInstance inst = tiny_instance(1, 1, {5.0}, {0});
  ConstraintMenu menu;
  StandardLP lp = compile_ipwc(inst, menu);
  CHECK(lp.n_vars() == 1);
  CHECK(lp.n_rows() == 1);
  CHECK(lp.objective[0] == -5.0);
  CHECK(lp.rhs[0] == 1.0);
  CHECK(lp.constraints.values[0] == 1.0);

  SimplexResult r = simplex_solve(densify(lp));
  CHECK(r.objective == doctest::Approx(-5.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
}

TEST_CASE("constraint counts reproduce the application-scale numbers") {
  ConstraintCounts full = constraint_count(229, 5, 2065758, MenuShape::full_ordered());
  CHECK(full.volume1 == 2290);
  CHECK(full.volume2 == 458);
  CHECK(full.similarity1 == 261060);
  CHECK(full.similarity2 == 52212);
  CHECK(full.targeting == 2065758);
  CHECK(full.total == 2381778);

  ConstraintCounts hier = constraint_count(229, 5, 2065758, MenuShape::hierarchical_default());
  CHECK(hier.volume2 == 229);
  CHECK(hier.similarity1 == 130530);
  CHECK(hier.similarity2 == 26106);
  CHECK(hier.total == 2224913);
}

TEST_CASE("constraint count formulas at other sizes") {
  ConstraintCounts c18 = constraint_count(18, 5, 1000, MenuShape::full_ordered());
  CHECK(c18.similarity1 == 1530);

  ConstraintCounts single = constraint_count(1, 3, 10, MenuShape::full_ordered());
  CHECK(single.similarity1 == 0);
  CHECK(single.similarity2 == 0);
}

TEST_CASE("compiled row count matches the closed form for all small sizes") {
  for (Index K = 1; K <= 6; ++K) {
    for (Index J = 1; J <= 3; ++J) {
      Index I = K * 5;
      std::vector<Index> segments(static_cast<std::size_t>(I));
      for (Index i = 0; i < I; ++i) segments[static_cast<std::size_t>(i)] = i % K;
      std::vector<double> profits(static_cast<std::size_t>(I * J), 1.0);
      TargetingInstance inst = tiny_instance(I, J, profits, segments);

      for (bool ordered : {true, false}) {
        for (int v2_sides : {0, 1, 2}) {
          MenuShape shape;
          shape.ordered_pairs = ordered;
          shape.volume2_sides = v2_sides;
          StandardLP lp = compile_ipwc(inst, dense_menu(inst, shape));
          ConstraintCounts c = constraint_count(K, J, I, shape);
          CHECK(lp.n_rows() == c.total);
        }
      }
    }
  }
}

TEST_CASE("objective is the negated profit matrix") {
  auto c = testutil::random_small_case(3);
  StandardLP lp = compile_ipwc(c.instance, c.menu);
  REQUIRE(lp.objective.size() == c.instance.profits.size());
  for (std::size_t w = 0; w < lp.objective.size(); ++w) {
    CHECK(lp.objective[w] == -c.instance.profits[w]);
  }
}

TEST_CASE("compiled nnz equals the analytic row supports") {
  auto c = testutil::random_small_case(4);
  StandardLP lp = compile_ipwc(c.instance, c.menu);
  const Index J = c.instance.n_actions;
  std::int64_t expected = 0;
  for (const VolumeIEntry& e : *c.menu.volume1) {
    expected += 2 * c.instance.segment_sizes[static_cast<std::size_t>(e.segment)];
  }
  for (Index k = 0; k < c.instance.n_segments(); ++k) {
    // lower-only weighted totals with unit weights
    expected += c.instance.segment_sizes[static_cast<std::size_t>(k)] * J;
  }
  if (c.menu.similarity1) {
    for (const SimilarityIEntry& e : *c.menu.similarity1) {
      expected += c.instance.segment_sizes[static_cast<std::size_t>(e.seg_a)] +
                  c.instance.segment_sizes[static_cast<std::size_t>(e.seg_b)];
    }
  }
  if (c.menu.similarity2) {
    for (const SimilarityIIPair& e : c.menu.similarity2->pairs) {
      expected += (c.instance.segment_sizes[static_cast<std::size_t>(e.seg_a)] +
                   c.instance.segment_sizes[static_cast<std::size_t>(e.seg_b)]) *
                  J;
    }
  }
  expected += c.instance.n_customers * J;  // targeting
  CHECK(lp.constraints.nnz() == expected);
}

TEST_CASE("similarity over an empty segment is a compile error") {
  TargetingInstance inst = tiny_instance(2, 1, {1.0, 2.0}, {0, 0});
  inst.segment_sizes.push_back(0);  // segment 1 exists but is empty
  ConstraintMenu menu;
  menu.similarity1 = std::vector<SimilarityIEntry>{{0, 0, 1, 1.1, 0.0}};
  CHECK_THROWS_WITH_AS(compile_ipwc(inst, menu), doctest::Contains("empty segment"),
                       std::invalid_argument);
}

TEST_CASE("menu validation rejects malformed entries") {
  TargetingInstance inst = tiny_instance(4, 2, std::vector<double>(8, 1.0), {0, 0, 1, 1});
  ConstraintMenu menu;
  menu.volume1 = std::vector<VolumeIEntry>{{0, 0, 2.0, 1.0}};  // lower > upper
  CHECK_THROWS_AS(compile_ipwc(inst, menu), std::invalid_argument);

  ConstraintMenu menu2;
  menu2.similarity1 = std::vector<SimilarityIEntry>{{0, 1, 1, 1.1, 0.0}};  // k1 == k2
  CHECK_THROWS_AS(compile_ipwc(inst, menu2), std::invalid_argument);

  ConstraintMenu menu3;
  menu3.similarity1 = std::vector<SimilarityIEntry>{{0, 0, 1, -1.0, 0.0}};  // ratio <= 0
  CHECK_THROWS_AS(compile_ipwc(inst, menu3), std::invalid_argument);
}

TEST_CASE("segment compilation with singleton action segments equals individual compilation") {
  auto c = testutil::random_small_case(7);
  for (Index i = 0; i < c.instance.n_customers; ++i) {
    c.instance.action_segment_of[static_cast<std::size_t>(i)] = i;
  }
  StandardLP a = compile_ipwc(c.instance, c.menu);
  StandardLP b = compile_spwc(c.instance, c.menu);
  CHECK(a.objective == b.objective);
  CHECK(a.rhs == b.rhs);
  CHECK(a.constraints.row_offsets == b.constraints.row_offsets);
  CHECK(a.constraints.col_indices == b.constraints.col_indices);
  CHECK(a.constraints.values == b.constraints.values);
}

TEST_CASE("two customers sharing a segment-level decision") {
  TargetingInstance inst = tiny_instance(2, 1, {3.0, -1.0}, {0, 0});
  ConstraintMenu menu;
  menu.volume1 = std::vector<VolumeIEntry>{{0, 0, 0.0, 1.0}};
  menu.targeting_enabled = false;
  StandardLP lp = compile_spwc(inst, menu);
  CHECK(lp.n_vars() == 1);
  CHECK(lp.objective[0] == doctest::Approx(-2.0));
  // upper row 2x <= 1, lower row -2x <= 0
  CHECK(lp.constraints.values[0] == doctest::Approx(2.0));
  SimplexResult r = simplex_solve(densify(lp));
  CHECK(r.x[0] == doctest::Approx(0.5));
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("individual policies dominate segment policies") {
  for (std::uint64_t seed = 40; seed < 48; ++seed) {
    auto c = testutil::random_small_case(seed, 30, 2);
    SimplexResult ipwc = simplex_solve(densify(compile_ipwc(c.instance, c.menu)));
    SimplexResult spwc = simplex_solve(densify(compile_spwc(c.instance, c.menu)));
    REQUIRE(ipwc.status == OracleStatus::optimal);
    REQUIRE(spwc.status == OracleStatus::optimal);
    // minimization: the individual-level optimum is no larger
    CHECK(ipwc.objective <= spwc.objective + 1e-9);
  }
}

TEST_CASE("pairwise model with one action reduces to the individual model") {
  TargetingInstance inst = tiny_instance(3, 1, {2.0, -1.0, 0.5}, {0, 0, 0});
  ConstraintMenu menu;
  std::vector<double> pair_profits(3, 0.0);  // I * 1 * 1, never read
  StandardLP plain = compile_ipwc(inst, menu);
  StandardLP inter = compile_interdependent(inst, menu, pair_profits);
  SimplexResult a = simplex_solve(densify(plain));
  SimplexResult b = simplex_solve(densify(inter));
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("pairwise profit above both singles wins") {
  TargetingInstance inst = tiny_instance(1, 2, {1.0, 1.0}, {0});
  ConstraintMenu menu;
  std::vector<double> q(4, 0.0);
  q[1] = 3.0;  // q^{0,1}
  StandardLP lp = compile_interdependent(inst, menu, q);
  SimplexResult r = simplex_solve(densify(lp));
  CHECK(r.objective == doctest::Approx(-3.0));
  // the pair column carries the whole mass
  CHECK(r.x[2] == doctest::Approx(1.0));
}

TEST_CASE("additive pair profits match the two-action individual model") {
  TargetingInstance inst = tiny_instance(3, 2, {2.0, 1.0, -0.5, 1.5, 0.75, -0.25}, {0, 0, 0}, 2);
  ConstraintMenu menu;
  std::vector<double> q(static_cast<std::size_t>(3 * 2 * 2), 0.0);
  for (Index i = 0; i < 3; ++i) {
    q[static_cast<std::size_t>((i * 2 + 0) * 2 + 1)] = inst.profit(i, 0) + inst.profit(i, 1);
  }
  SimplexResult individual = simplex_solve(densify(compile_ipwc(inst, menu)));
  SimplexResult pairwise = simplex_solve(densify(compile_interdependent(inst, menu, q)));
  CHECK(individual.objective == doctest::Approx(pairwise.objective).epsilon(1e-9));
}

TEST_CASE("pairwise compilation rejects a mis-sized profit tensor") {
  TargetingInstance inst = tiny_instance(2, 2, {1.0, 1.0, 1.0, 1.0}, {0, 0});
  CHECK_THROWS_AS(compile_interdependent(inst, ConstraintMenu{}, std::vector<double>(3, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("validate_policy rejects a policy shaped for neither level") {
  TargetingInstance inst = tiny_instance(3, 2, std::vector<double>(6, 1.0), {0, 0, 0});
  Policy p;
  p.n_rows = 2;  // neither 3 customers nor 1 action segment
  p.n_actions = 2;
  p.assignment.assign(4, 0.0);
  CHECK_THROWS_AS(validate_policy(p, inst, ConstraintMenu{}, 1e-6), std::invalid_argument);
}

TEST_CASE("extract_policy on the zero vector and on the trivial optimum") {
  TargetingInstance inst = tiny_instance(1, 1, {5.0}, {0});
  ConstraintMenu menu;
  StandardLP lp = compile_ipwc(inst, menu);

  Policy zero = extract_policy(lp, DenseVector{0.0}, inst);
  CHECK(zero.objective_value == 0.0);
  CHECK(zero.at(0, 0) == 0.0);

  Policy opt = extract_policy(lp, DenseVector{1.0}, inst);
  CHECK(opt.objective_value == doctest::Approx(5.0));
  CHECK(opt.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("extract_policy objective matches direct profit summation") {
  auto c = testutil::random_small_case(9);
  StandardLP lp = compile_ipwc(c.instance, c.menu);
  DenseVector primal = testutil::random_vector(lp.n_vars(), 91, 0.0, 1.0);
  Policy p = extract_policy(lp, primal, c.instance);
  double direct = 0.0;
  for (Index i = 0; i < c.instance.n_customers; ++i) {
    for (Index j = 0; j < c.instance.n_actions; ++j) {
      direct += c.instance.profit(i, j) * p.at(i, j);
    }
  }
  CHECK(p.objective_value == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("extract_policy rejects mismatched vectors") {
  TargetingInstance inst = tiny_instance(1, 1, {5.0}, {0});
  StandardLP lp = compile_ipwc(inst, ConstraintMenu{});
  CHECK_THROWS_AS(extract_policy(lp, DenseVector{0.0, 0.0}, inst), std::invalid_argument);
  CHECK_THROWS_AS(extract_policy(lp, DenseVector{2.0}, inst), std::invalid_argument);
}

TEST_CASE("zero policy violates exactly the positive lower volume bounds") {
  TargetingInstance inst = tiny_instance(4, 2, std::vector<double>(8, 1.0), {0, 0, 1, 1});
  ConstraintMenu menu;
  menu.volume1 = std::vector<VolumeIEntry>{
      {0, 0, 1.0, 2.0}, {0, 1, 0.0, 2.0}, {1, 0, 2.0, 2.0}, {1, 1, 0.0, 1.0}};
  menu.targeting_enabled = false;
  Policy zero;
  zero.n_rows = 4;
  zero.n_actions = 2;
  zero.assignment.assign(8, 0.0);
  auto report = validate_policy(zero, inst, menu, 1e-6);
  REQUIRE(report.size() == 2);
  for (const Violation& v : report) {
    CHECK(v.family == ConstraintFamily::volume1);
    CHECK(v.amount > 0.0);
  }
}

TEST_CASE("oracle optimum validates cleanly") {
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    auto c = testutil::random_small_case(seed);
    StandardLP lp = compile_ipwc(c.instance, c.menu);
    SimplexResult r = simplex_solve(densify(lp));
    REQUIRE(r.status == OracleStatus::optimal);
    Policy p = extract_policy(lp, r.x, c.instance);
    auto report = validate_policy(p, c.instance, c.menu, 1e-6);
    CHECK(report.empty());
  }
}

TEST_CASE("saturated policy trips the per-customer cap") {
  TargetingInstance inst = tiny_instance(3, 2, std::vector<double>(6, 1.0), {0, 0, 0});
  ConstraintMenu menu;  // targeting only, cap 1
  Policy ones;
  ones.n_rows = 3;
  ones.n_actions = 2;
  ones.assignment.assign(6, 1.0);
  auto report = validate_policy(ones, inst, menu, 1e-6);
  REQUIRE(report.size() == 3);
  for (const Violation& v : report) {
    CHECK(v.family == ConstraintFamily::targeting);
    CHECK(v.amount == doctest::Approx(1.0));
  }
}
