#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "hems/branch_and_bound.hpp"
#include "hems/milp.hpp"
#include "oracles/enumeration.hpp"
#include "support.hpp"

using hems::milp::BnbParams;
using hems::milp::branch_and_bound;
using hems::milp::kInfinity;
using hems::milp::MilpStatus;
using hems::milp::Model;
using hems::milp::Sense;
using hems::milp::VarId;

TEST_CASE("pure LP reduces to the relaxation") {
  Model m;
  VarId x = m.add_continuous("x", 0.0, 4.0, -1.0);
  VarId y = m.add_continuous("y", 0.0, 4.0, -2.0);
  m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::LE, 5.0, "cap");
  auto milp = branch_and_bound(m);
  auto lp = hems::milp::solve_lp(m);
  REQUIRE(milp.status == MilpStatus::Optimal);
  CHECK(milp.nodes_explored == 1);
  CHECK_THAT(milp.objective, Catch::Matchers::WithinAbs(lp.objective, 1e-9));
}

TEST_CASE("knapsack against exhaustive enumeration") {
  const std::vector<double> value = {6, 5, 8, 9, 6, 7, 3, 2, 7, 4};
  const std::vector<double> weight = {2, 3, 6, 7, 5, 9, 4, 1, 8, 6};
  Model m;
  std::vector<std::pair<VarId, double>> row;
  for (std::size_t i = 0; i < value.size(); ++i) {
    VarId b = m.add_binary("b" + std::to_string(i), -value[i]);
    row.emplace_back(b, weight[i]);
  }
  m.add_constraint(std::move(row), Sense::LE, 20.0, "weight");

  auto mine = branch_and_bound(m);
  auto ref = oracle::enumerate_milp(m);
  REQUIRE(ref.status == oracle::MilpResult::Status::Optimal);
  REQUIRE(mine.status == MilpStatus::Optimal);
  CHECK_THAT(mine.objective, Catch::Matchers::WithinAbs(ref.objective, 1e-6));
  for (double v : mine.assignment)
    CHECK(std::min(std::abs(v), std::abs(v - 1.0)) < 1e-9);
}

TEST_CASE("random mixed instances agree with enumeration") {
  std::mt19937 rng(777001);
  for (int trial = 0; trial < 60; ++trial) {
    INFO("trial " << trial);
    Model m = testsup::random_milp(rng);
    auto mine = branch_and_bound(m);
    auto ref = oracle::enumerate_milp(m);
    if (ref.status == oracle::MilpResult::Status::Infeasible) {
      REQUIRE(mine.status == MilpStatus::Infeasible);
      continue;
    }
    REQUIRE(ref.status == oracle::MilpResult::Status::Optimal);
    REQUIRE(mine.status == MilpStatus::Optimal);
    REQUIRE_THAT(mine.objective,
                 Catch::Matchers::WithinAbs(ref.objective, 1e-6));
    REQUIRE(hems::milp::check_assignment(m, mine.assignment, 1e-6).empty());
  }
}

TEST_CASE("infeasible root is classified, not searched") {
  Model m;
  VarId b = m.add_binary("b", 1.0);
  m.add_constraint({{b, 1.0}}, Sense::GE, 2.0, "impossible");
  auto r = branch_and_bound(m);
  CHECK(r.status == MilpStatus::Infeasible);
  CHECK_FALSE(r.has_incumbent());
}

TEST_CASE("limits cut the search off honestly") {
  // A fractional-at-root instance so the search must branch.
  Model m;
  std::vector<std::pair<VarId, double>> row;
  for (int i = 0; i < 8; ++i) {
    VarId b = m.add_binary("b" + std::to_string(i), -(3.0 + 0.1 * i));
    row.emplace_back(b, 2.0 + 0.3 * i);
  }
  m.add_constraint(std::move(row), Sense::LE, 7.7, "weight");

  SECTION("node limit") {
    BnbParams p;
    p.node_limit = 1;
    auto r = branch_and_bound(m, p);
    CHECK(r.status == MilpStatus::LimitReached);
    CHECK(r.nodes_explored == 1);
    if (r.has_incumbent()) {
      CHECK(r.gap > 0.0);
      CHECK(hems::milp::check_assignment(m, r.assignment, 1e-6).empty());
    }
  }
  SECTION("time limit") {
    BnbParams p;
    p.time_limit_s = 0.0;
    auto r = branch_and_bound(m, p);
    CHECK(r.status == MilpStatus::LimitReached);
  }
  SECTION("unrestricted run closes the gap") {
    auto r = branch_and_bound(m);
    REQUIRE(r.status == MilpStatus::Optimal);
    CHECK(r.gap == 0.0);
    auto ref = oracle::enumerate_milp(m);
    CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(ref.objective, 1e-6));
  }
}

TEST_CASE("unbounded mixed model is reported") {
  Model m;
  m.add_binary("b", 1.0);
  VarId x = m.add_continuous("x", 0.0, kInfinity, -1.0);
  VarId y = m.add_continuous("y", 0.0, 1.0, 0.0);
  m.add_constraint({{x, -1.0}, {y, 1.0}}, Sense::LE, -50.0, "loose");
  auto r = branch_and_bound(m);
  CHECK(r.status == MilpStatus::Unbounded);
}

TEST_CASE("tolerances must be positive") {
  Model m;
  m.add_binary("b", 1.0);
  BnbParams p;
  p.gap_abs = 0.0;
  CHECK_THROWS_AS(branch_and_bound(m, p), hems::milp::SolverError);
}
