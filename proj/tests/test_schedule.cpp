#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "hems/branch_and_bound.hpp"
#include "hems/formulation.hpp"
#include "hems/schedule.hpp"
#include "support.hpp"

using hems::milp::branch_and_bound;
using hems::milp::MilpSolution;
using hems::milp::MilpStatus;
using hems::schedule::compute_cost;
using hems::schedule::DecodeError;
using hems::schedule::extract_schedule;
namespace fm = hems::formulation;

TEST_CASE("decoded dispatch matches the solved model") {
  const hems::ScenarioConfig config = testsup::mini_config_with_storage();
  const auto model = fm::build(config);
  const auto solution = branch_and_bound(model);
  REQUIRE(solution.status == MilpStatus::Optimal);

  const auto s = extract_schedule(solution, model, config);
  CHECK(s.horizon == 6);
  CHECK(s.interval_hours == 1.0);
  CHECK(s.ac_on.size() == 6);
  CHECK(s.theta_in_c.size() == 6);
  REQUIRE(s.appliances.size() == 1);
  CHECK(s.appliances[0].name == "washer");
  CHECK(s.appliances[0].rated_kw == 0.5);
  REQUIRE(s.storages.size() == 1);
  CHECK(s.pv_used_kw.empty());  // PV absent from the mini scenario

  // Statuses are exact 0/1 and temperatures stay inside their bands.
  int washer_total = 0;
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK((s.ac_on[t] == 0 || s.ac_on[t] == 1));
    CHECK((s.ac_on[t] + s.ht_on[t] <= 1));
    washer_total += s.appliances[0].on[t];
    CHECK(s.theta_in_c[t] >= 20.0 - 1e-9);
    CHECK(s.theta_in_c[t] <= 24.0 + 1e-9);
    CHECK(s.theta_fr_c[t] >= 2.0 - 1e-9);
    CHECK(s.theta_fr_c[t] <= 6.0 + 1e-9);
  }
  CHECK(washer_total == 1);

  // SOE series exists everywhere (battery is available all day) and stays
  // within its limits.
  for (const auto& soe : s.storages[0].soe_kwh) {
    REQUIRE(soe.has_value());
    CHECK(*soe >= 0.5 - 1e-9);
    CHECK(*soe <= 2.0 + 1e-9);
  }
}

TEST_CASE("cost ledger reproduces the solver objective") {
  const hems::ScenarioConfig config = testsup::mini_config_with_storage();
  const auto model = fm::build(config);
  const auto solution = branch_and_bound(model);
  REQUIRE(solution.status == MilpStatus::Optimal);

  const auto s = extract_schedule(solution, model, config);
  const auto cost = compute_cost(s, config);
  CHECK_THAT(cost.total, Catch::Matchers::WithinAbs(solution.objective, 1e-6));

  // Degradation is exactly cost * throughput * dt, recomputed here in the
  // same order.
  REQUIRE(cost.degradation.size() == 1);
  CHECK(cost.degradation[0].first == "batt");
  double throughput = 0.0;
  for (std::size_t t = 0; t < s.horizon; ++t)
    throughput += (s.storages[0].charge_kw[t] + s.storages[0].discharge_kw[t]) *
                  s.interval_hours;
  CHECK(cost.degradation[0].second == 0.01 * throughput);

  CHECK_THAT(cost.total,
             Catch::Matchers::WithinAbs(cost.energy_purchase -
                                            cost.energy_sale_revenue +
                                            cost.degradation_total(),
                                        0.0));
}

TEST_CASE("an all-zero dispatch prices to zero") {
  hems::ScenarioConfig config = testsup::mini_config(3);
  config.appliances.clear();
  const auto model = fm::build(config);
  const auto solution = branch_and_bound(model);
  REQUIRE(solution.status == MilpStatus::Optimal);
  const auto s = extract_schedule(solution, model, config);
  const auto cost = compute_cost(s, config);
  CHECK_THAT(cost.total, Catch::Matchers::WithinAbs(0.0, 1e-9));
  CHECK(cost.degradation.empty());
}

TEST_CASE("solutions without an incumbent refuse to decode") {
  const hems::ScenarioConfig config = testsup::mini_config();
  const auto model = fm::build(config);
  MilpSolution empty;
  empty.status = MilpStatus::Infeasible;
  CHECK_THROWS_AS(extract_schedule(empty, model, config), DecodeError);

  MilpSolution truncated;
  truncated.status = MilpStatus::Optimal;
  truncated.assignment.assign(3, 0.0);  // wrong length
  CHECK_THROWS_AS(extract_schedule(truncated, model, config), DecodeError);
}

TEST_CASE("limit-capped incumbents decode like optima") {
  const hems::ScenarioConfig config = testsup::mini_config_with_storage();
  const auto model = fm::build(config);
  hems::milp::BnbParams params;
  params.node_limit = 1;
  const auto solution = branch_and_bound(model, params);
  REQUIRE(solution.status == MilpStatus::LimitReached);
  if (solution.has_incumbent()) {
    const auto s = extract_schedule(solution, model, config);
    const auto cost = compute_cost(s, config);
    CHECK_THAT(cost.total,
               Catch::Matchers::WithinAbs(solution.objective, 1e-6));
  }
}
