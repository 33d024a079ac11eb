#pragma once

// Shared fixtures for the test binaries: a small fully featured scenario
// and seeded random-model generators used by the oracle comparisons.

#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "hems/domain.hpp"
#include "hems/milp.hpp"

namespace testsup {

inline hems::Profile flat(hems::ProfileKind kind, std::size_t n, double v) {
  hems::Profile p;
  p.kind = kind;
  p.values.assign(n, v);
  return p;
}

inline hems::Profile series(hems::ProfileKind kind,
                            std::vector<double> values) {
  hems::Profile p;
  p.kind = kind;
  p.values = std::move(values);
  return p;
}

inline std::set<std::size_t> range_set(std::size_t first, std::size_t last) {
  std::set<std::size_t> s;
  for (std::size_t t = first; t <= last; ++t) s.insert(t);
  return s;
}

/// Six-interval scenario with HVAC, fridge, and one washer; flat outside
/// temperature equal to the initial indoor temperature and zero activity,
/// so the HVAC may stay off. The fridge drifts warm and must cool at
/// least once; prices alternate to make the timing matter.
inline hems::ScenarioConfig mini_config(std::size_t horizon = 6) {
  hems::ScenarioConfig c;
  c.name = "mini";
  c.grid.horizon_len = horizon;
  c.grid.interval_hours = 1.0;
  c.outside_temperature =
      flat(hems::ProfileKind::OutsideTemperature, horizon, 22.0);
  c.activity_level = flat(hems::ProfileKind::ActivityLevel, horizon, 0.0);
  std::vector<double> price(horizon);
  for (std::size_t i = 0; i < horizon; ++i)
    price[i] = (i % 2 == 0) ? 0.10 : 0.30;
  c.buy_price = series(hems::ProfileKind::BuyPrice, std::move(price));
  c.pv_enabled = false;
  c.pv_output = flat(hems::ProfileKind::PvOutput, horizon, 0.0);

  hems::CyclingAppliance washer;
  washer.name = "washer";
  washer.rated_kw = 0.5;
  washer.required_runtime = 1;
  washer.max_successive = 1;
  washer.min_up = 1;
  washer.min_down = 1;
  washer.allowed_window = range_set(2, horizon - 1);
  c.appliances.push_back(std::move(washer));

  c.contract.sell_price = 0.05;
  c.contract.max_buy_kw = 10.0;
  c.contract.max_sell_kw = 2.0;
  return c;
}

/// mini_config plus a small bi-directional battery.
inline hems::ScenarioConfig mini_config_with_storage(std::size_t horizon = 6) {
  hems::ScenarioConfig c = mini_config(horizon);
  hems::StorageDevice b;
  b.name = "batt";
  b.capacity_kwh = 2.0;
  b.soe_init = 1.0;
  b.soe_min = 0.5;
  b.soe_max = 2.0;
  b.charge_rate_kw = 1.0;
  b.discharge_rate_kw = 1.0;
  b.eta_charge = 0.9;
  b.eta_discharge = 0.9;
  b.degradation_cost = 0.01;
  b.availability = range_set(1, horizon);
  b.can_sell_to_grid = true;
  b.can_charge_from_grid = true;
  c.storages.push_back(std::move(b));
  return c;
}

/// In-code twin of the shipped bi-directional scenario: 24 intervals,
/// washer/dryer with precedence, stationary battery, deadline-bound
/// vehicle, PV. Profile values are plausible flats; the structure is what
/// matters to the tests that use this.
inline hems::ScenarioConfig full_config() {
  hems::ScenarioConfig c;
  c.name = "full";
  c.grid.horizon_len = 24;
  c.grid.interval_hours = 1.0;
  c.outside_temperature = flat(hems::ProfileKind::OutsideTemperature, 24, 25.0);
  c.activity_level = flat(hems::ProfileKind::ActivityLevel, 24, 0.3);
  c.buy_price = flat(hems::ProfileKind::BuyPrice, 24, 0.2);
  c.pv_output = flat(hems::ProfileKind::PvOutput, 24, 0.4);
  c.pv_enabled = true;

  hems::CyclingAppliance washer;
  washer.name = "washer";
  washer.rated_kw = 0.5;
  washer.required_runtime = 2;
  washer.max_successive = 2;
  washer.min_up = 1;
  washer.min_down = 1;
  washer.allowed_window = range_set(8, 22);
  c.appliances.push_back(washer);

  hems::CyclingAppliance dryer = washer;
  dryer.name = "dryer";
  dryer.rated_kw = 3.5;
  dryer.allowed_window = range_set(8, 23);
  c.appliances.push_back(dryer);

  hems::PrecedencePair pair;
  pair.first = "washer";
  pair.second = "dryer";
  pair.gap_omega = 3;
  c.precedences.push_back(pair);

  hems::StorageDevice desd;
  desd.name = "desd";
  desd.capacity_kwh = 4.0;
  desd.soe_init = 2.0;
  desd.soe_min = 0.4;
  desd.soe_max = 4.0;
  desd.charge_rate_kw = 1.0;
  desd.discharge_rate_kw = 1.0;
  desd.eta_charge = 0.95;
  desd.eta_discharge = 0.95;
  desd.degradation_cost = 0.01;
  desd.availability = range_set(1, 24);
  desd.can_sell_to_grid = true;
  desd.can_charge_from_grid = true;
  c.storages.push_back(desd);

  hems::StorageDevice phev;
  phev.name = "phev";
  phev.capacity_kwh = 16.0;
  phev.soe_init = 10.0;
  phev.soe_min = 3.2;
  phev.soe_max = 16.0;
  phev.charge_rate_kw = 3.3;
  phev.discharge_rate_kw = 3.3;
  phev.eta_charge = 0.95;
  phev.eta_discharge = 0.95;
  phev.degradation_cost = 0.01;
  phev.availability = range_set(19, 24);
  phev.full_charge_deadline = 24;
  phev.can_sell_to_grid = true;
  phev.can_charge_from_grid = true;
  c.storages.push_back(phev);

  c.contract.sell_price = 0.07;
  c.contract.max_buy_kw = 10.0;
  c.contract.max_sell_kw = 5.0;
  return c;
}

/// Random LP with finite bounds on every variable and rows anchored at an
/// interior point, so the instance is always feasible and bounded.
inline hems::milp::Model random_feasible_lp(std::mt19937& rng) {
  using hems::milp::Sense;
  std::uniform_int_distribution<std::size_t> nvars(1, 20);
  std::uniform_int_distribution<std::size_t> nrows(1, 25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  hems::milp::Model m;
  const std::size_t n = nvars(rng);
  std::vector<double> anchor(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = -4.0 * unit(rng);
    const double up = lo + 0.5 + 5.5 * unit(rng);
    const double obj = -2.0 + 4.0 * unit(rng);
    m.add_continuous("x" + std::to_string(j), lo, up, obj);
    anchor[j] = lo + (up - lo) * unit(rng);
  }
  const std::size_t rows = nrows(rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t i = 0; i < rows; ++i) {
    std::set<std::size_t> chosen;
    const std::size_t terms = 1 + pick(rng) % std::min<std::size_t>(n, 6);
    while (chosen.size() < terms) chosen.insert(pick(rng));
    std::vector<std::pair<hems::milp::VarId, double>> row;
    double at_anchor = 0.0;
    for (std::size_t j : chosen) {
      double coeff = -3.0 + 6.0 * unit(rng);
      if (std::abs(coeff) < 0.05) coeff = coeff < 0 ? -0.05 : 0.05;
      row.emplace_back(hems::milp::VarId{j}, coeff);
      at_anchor += coeff * anchor[j];
    }
    const double roll = unit(rng);
    if (roll < 0.4) {
      m.add_constraint(std::move(row), Sense::LE, at_anchor + 2.0 * unit(rng),
                       "r" + std::to_string(i));
    } else if (roll < 0.8) {
      m.add_constraint(std::move(row), Sense::GE, at_anchor - 2.0 * unit(rng),
                       "r" + std::to_string(i));
    } else {
      m.add_constraint(std::move(row), Sense::EQ, at_anchor,
                       "r" + std::to_string(i));
    }
  }
  return m;
}

/// Random MILP with finite bounds; roughly two thirds are anchored at a
/// mixed-integer point (certainly feasible), the rest draw a free rhs and
/// may come out infeasible. Never unbounded.
inline hems::milp::Model random_milp(std::mt19937& rng) {
  using hems::milp::Sense;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> nbin(0, 12);
  std::uniform_int_distribution<std::size_t> ncont(0, 20);
  std::uniform_int_distribution<std::size_t> nrows(1, 25);

  hems::milp::Model m;
  const std::size_t nb = nbin(rng);
  std::size_t nc = ncont(rng);
  if (nb + nc == 0) nc = 1;
  const std::size_t n = nb + nc;

  std::vector<double> anchor(n);
  for (std::size_t j = 0; j < nb; ++j) {
    m.add_binary("b" + std::to_string(j), -2.0 + 4.0 * unit(rng));
    anchor[j] = unit(rng) < 0.5 ? 0.0 : 1.0;
  }
  for (std::size_t j = nb; j < n; ++j) {
    const double lo = -3.0 * unit(rng);
    const double up = lo + 0.5 + 4.5 * unit(rng);
    m.add_continuous("x" + std::to_string(j), lo, up, -2.0 + 4.0 * unit(rng));
    anchor[j] = lo + (up - lo) * unit(rng);
  }

  const bool anchored = unit(rng) < 0.65;
  const std::size_t rows = nrows(rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t i = 0; i < rows; ++i) {
    std::set<std::size_t> chosen;
    const std::size_t terms = 1 + pick(rng) % std::min<std::size_t>(n, 5);
    while (chosen.size() < terms) chosen.insert(pick(rng));
    std::vector<std::pair<hems::milp::VarId, double>> row;
    double at_anchor = 0.0;
    for (std::size_t j : chosen) {
      double coeff = -3.0 + 6.0 * unit(rng);
      if (std::abs(coeff) < 0.05) coeff = coeff < 0 ? -0.05 : 0.05;
      row.emplace_back(hems::milp::VarId{j}, coeff);
      at_anchor += coeff * anchor[j];
    }
    double rhs;
    Sense sense;
    const double roll = unit(rng);
    if (roll < 0.45) {
      sense = Sense::LE;
      rhs = anchored ? at_anchor + 1.5 * unit(rng) : -4.0 + 8.0 * unit(rng);
    } else if (roll < 0.9) {
      sense = Sense::GE;
      rhs = anchored ? at_anchor - 1.5 * unit(rng) : -4.0 + 8.0 * unit(rng);
    } else {
      sense = Sense::EQ;
      rhs = at_anchor;
    }
    m.add_constraint(std::move(row), sense, rhs, "r" + std::to_string(i));
  }
  return m;
}

}  // namespace testsup
