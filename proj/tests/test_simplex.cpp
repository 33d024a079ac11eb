#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hems/milp.hpp"
#include "hems/simplex.hpp"
#include "oracles/naive_simplex.hpp"
#include "support.hpp"

using hems::milp::kInfinity;
using hems::milp::LpStatus;
using hems::milp::Model;
using hems::milp::Sense;
using hems::milp::solve_lp;
using hems::milp::VarId;

TEST_CASE("textbook instances") {
  SECTION("maximize a single bounded variable") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, kInfinity, -1.0);
    m.add_constraint({{x, 1.0}}, Sense::LE, 1.0, "cap");
    auto r = solve_lp(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-1.0, 1e-9));
    CHECK_THAT(r.assignment[0], Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
  SECTION("covering pair") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, kInfinity, 1.0);
    VarId y = m.add_continuous("y", 0.0, kInfinity, 1.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::GE, 2.0, "cover");
    auto r = solve_lp(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(2.0, 1e-9));
  }
  SECTION("negative lower bounds") {
    Model m;
    VarId x = m.add_continuous("x", -5.0, 5.0, 1.0);
    VarId y = m.add_continuous("y", -5.0, 5.0, 2.0);
    m.add_constraint({{x, 1.0}, {y, -1.0}}, Sense::LE, -2.0, "gap");
    auto r = solve_lp(m);
    REQUIRE(r.status == LpStatus::Optimal);
    // x at its floor, y as low as the row allows: y >= x + 2.
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-5.0 + 2.0 * -3.0, 1e-9));
  }
  SECTION("equality row pins the optimum") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, 10.0, 3.0);
    VarId y = m.add_continuous("y", 0.0, 10.0, 1.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::EQ, 4.0, "mix");
    auto r = solve_lp(m);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(4.0, 1e-9));
    CHECK_THAT(r.assignment[y.index], Catch::Matchers::WithinAbs(4.0, 1e-9));
  }
}

TEST_CASE("infeasible and unbounded classification matches the oracle") {
  SECTION("conflicting covering rows") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, 1.0, 1.0);
    VarId y = m.add_continuous("y", 0.0, 1.0, 1.0);
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::LE, 1.0, "r0");
    m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::GE, 3.0, "r1");
    CHECK(solve_lp(m).status == LpStatus::Infeasible);
    CHECK(oracle::solve(m).status == oracle::LpStatus::Infeasible);
  }
  SECTION("equality out of reach") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, 1.0, 1.0);
    m.add_constraint({{x, 2.0}}, Sense::EQ, 5.0, "r0");
    CHECK(solve_lp(m).status == LpStatus::Infeasible);
    CHECK(oracle::solve(m).status == oracle::LpStatus::Infeasible);
  }
  SECTION("row against the variable bound") {
    Model m;
    VarId x = m.add_continuous("x", 0.8, 2.0, 1.0);
    m.add_constraint({{x, 1.0}}, Sense::LE, 0.5, "r0");
    CHECK(solve_lp(m).status == LpStatus::Infeasible);
    CHECK(oracle::solve(m).status == oracle::LpStatus::Infeasible);
  }
  SECTION("cost ray without an upper bound") {
    Model m;
    VarId x = m.add_continuous("x", 0.0, kInfinity, -1.0);
    VarId y = m.add_continuous("y", 0.0, 5.0, 0.0);
    m.add_constraint({{x, -1.0}, {y, 1.0}}, Sense::LE, -100.0, "r0");
    CHECK(solve_lp(m).status == LpStatus::Unbounded);
    CHECK(oracle::solve(m).status == oracle::LpStatus::Unbounded);
  }
}

TEST_CASE("random feasible instances agree with the naive oracle") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    INFO("trial " << trial);
    Model m = testsup::random_feasible_lp(rng);
    auto mine = solve_lp(m);
    auto ref = oracle::solve(m);
    REQUIRE(ref.status == oracle::LpStatus::Optimal);
    REQUIRE(mine.status == LpStatus::Optimal);
    REQUIRE_THAT(mine.objective,
                 Catch::Matchers::WithinAbs(ref.objective, 1e-6));
    // The reported point must actually attain the reported objective.
    REQUIRE(hems::milp::check_assignment(m, mine.assignment, 1e-6).empty());
    REQUIRE_THAT(m.objective_value(mine.assignment),
                 Catch::Matchers::WithinAbs(mine.objective, 1e-7));
  }
}

TEST_CASE("bound overrides narrow the feasible box") {
  Model m;
  VarId x = m.add_continuous("x", 0.0, 10.0, -1.0);
  m.add_constraint({{x, 1.0}}, Sense::LE, 8.0, "cap");
  auto base = solve_lp(m);
  REQUIRE(base.status == LpStatus::Optimal);
  CHECK_THAT(base.objective, Catch::Matchers::WithinAbs(-8.0, 1e-9));

  auto tightened = solve_lp(m, {2.0}, {3.0});
  REQUIRE(tightened.status == LpStatus::Optimal);
  CHECK_THAT(tightened.objective, Catch::Matchers::WithinAbs(-3.0, 1e-9));

  auto conflicting = solve_lp(m, {9.0}, {10.0});
  CHECK(conflicting.status == LpStatus::Infeasible);
}
