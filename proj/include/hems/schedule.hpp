#pragma once

// Decodes a solver assignment into per-interval dispatch series (device
// ON/OFF, temperatures, storage flows and SOE, grid exchange) plus a cost
// ledger whose total reproduces the model objective. Lookups go through
// the same variable-name convention the formulation emits, so the decode
// works on any model built from the matching config.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hems/branch_and_bound.hpp"
#include "hems/domain.hpp"
#include "hems/formulation.hpp"
#include "hems/milp.hpp"

namespace hems::schedule {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ApplianceRow {
  std::string name;
  double rated_kw = 0.0;
  std::vector<int> on;  // 0/1 per interval
};

struct StorageRow {
  std::string name;
  std::vector<double> charge_kw;
  std::vector<double> discharge_kw;
  std::vector<double> used_kw;
  std::vector<double> sold_kw;
  std::vector<std::optional<double>> soe_kwh;  // empty outside availability
};

/// Per-interval dispatch of every modeled device; vectors are indexed
/// t-1 and have horizon length.
struct Schedule {
  std::size_t horizon = 0;
  double interval_hours = 1.0;
  std::vector<int> ac_on, ht_on, fridge_on;
  std::vector<double> theta_in_c, theta_fr_c;
  std::vector<ApplianceRow> appliances;
  std::vector<StorageRow> storages;
  std::vector<double> pv_used_kw, pv_sold_kw;  // empty when PV is absent
  std::vector<double> buy_kw, sell_kw;
  std::vector<int> grid_buy_mode;  // 1 = buying side of the exclusion
};

/// Cost ledger: energy purchases minus sale revenue plus per-device
/// degradation. `total` reproduces the solver objective.
struct CostBreakdown {
  double energy_purchase = 0.0;
  double energy_sale_revenue = 0.0;
  std::vector<std::pair<std::string, double>> degradation;  // per storage
  double total = 0.0;

  double degradation_total() const {
    double sum = 0.0;
    for (const auto& [name, d] : degradation) sum += d;
    return sum;
  }
};

namespace detail {

inline double value_of(const milp::Model& model, const std::vector<double>& x,
                       const std::string& name) {
  auto id = model.find(name);
  if (!id)
    throw DecodeError("schedule decode: variable '" + name +
                      "' missing from model");
  return x[id->index];
}

inline int on_off(const milp::Model& model, const std::vector<double>& x,
                  const std::string& name) {
  return value_of(model, x, name) >= 0.5 ? 1 : 0;
}

}  // namespace detail

/// Reads the assignment back into dispatch series. Accepts any solution
/// that carries an assignment (an incumbent under a limit decodes the same
/// way an optimum does); a solution without one is an error.
inline Schedule extract_schedule(const milp::MilpSolution& solution,
                                 const milp::Model& model,
                                 const ScenarioConfig& config) {
  if (!solution.has_incumbent())
    throw DecodeError("schedule decode: solution status " +
                      std::string(to_string(solution.status)) +
                      " carries no assignment");
  if (solution.assignment.size() != model.num_vars())
    throw DecodeError("schedule decode: assignment size does not match model");

  const std::vector<double>& x = solution.assignment;
  const std::size_t H = config.grid.horizon_len;
  using formulation::detail::var_name;

  Schedule s;
  s.horizon = H;
  s.interval_hours = config.grid.interval_hours;
  for (std::size_t t = 1; t <= H; ++t) {
    s.ac_on.push_back(detail::on_off(model, x, var_name("s", "ac", t)));
    s.ht_on.push_back(detail::on_off(model, x, var_name("s", "ht", t)));
    s.fridge_on.push_back(
        detail::on_off(model, x, var_name("s", "fridge", t)));
    s.theta_in_c.push_back(
        detail::value_of(model, x, var_name("theta_in", "hvac", t)));
    s.theta_fr_c.push_back(
        detail::value_of(model, x, var_name("theta_fr", "fridge", t)));
    s.buy_kw.push_back(
        detail::value_of(model, x, var_name("P_buy", "grid", t)));
    s.sell_kw.push_back(
        detail::value_of(model, x, var_name("P_sell", "grid", t)));
    s.grid_buy_mode.push_back(
        detail::on_off(model, x, var_name("s", "grid", t)));
  }

  for (const auto& app : config.appliances) {
    ApplianceRow row;
    row.name = app.name;
    row.rated_kw = app.rated_kw;
    for (std::size_t t = 1; t <= H; ++t)
      row.on.push_back(detail::on_off(model, x, var_name("s", app.name, t)));
    s.appliances.push_back(std::move(row));
  }

  for (const auto& dev : config.storages) {
    StorageRow row;
    row.name = dev.name;
    for (std::size_t t = 1; t <= H; ++t) {
      row.charge_kw.push_back(
          detail::value_of(model, x, var_name("P_ch", dev.name, t)));
      row.discharge_kw.push_back(
          detail::value_of(model, x, var_name("P_dis", dev.name, t)));
      row.used_kw.push_back(
          detail::value_of(model, x, var_name("P_used", dev.name, t)));
      row.sold_kw.push_back(
          detail::value_of(model, x, var_name("P_sell", dev.name, t)));
      if (auto id = model.find(var_name("soe", dev.name, t)))
        row.soe_kwh.push_back(x[id->index]);
      else
        row.soe_kwh.push_back(std::nullopt);
    }
    s.storages.push_back(std::move(row));
  }

  if (config.pv_enabled) {
    for (std::size_t t = 1; t <= H; ++t) {
      s.pv_used_kw.push_back(
          detail::value_of(model, x, var_name("P_used", "pv", t)));
      s.pv_sold_kw.push_back(
          detail::value_of(model, x, var_name("P_sell", "pv", t)));
    }
  }
  return s;
}

/// Recomputes the cost ledger from dispatch series and tariff data alone:
/// purchase = Σ P_buy·price·Δt, revenue = Σ P_sell·sell_price·Δt, and one
/// degradation entry per storage device charged on total throughput. The
/// resulting total equals the model objective of the same assignment.
inline CostBreakdown compute_cost(const Schedule& s,
                                  const ScenarioConfig& config) {
  if (config.buy_price.size() != s.horizon)
    throw DecodeError("cost ledger: buy_price length does not match horizon");
  const double dt = s.interval_hours;

  CostBreakdown out;
  for (std::size_t t = 1; t <= s.horizon; ++t) {
    out.energy_purchase += s.buy_kw[t - 1] * config.buy_price.at(t) * dt;
    out.energy_sale_revenue +=
        s.sell_kw[t - 1] * config.contract.sell_price * dt;
  }
  for (const auto& row : s.storages) {
    const StorageDevice* dev = nullptr;
    for (const auto& d : config.storages)
      if (d.name == row.name) dev = &d;
    if (!dev)
      throw DecodeError("cost ledger: storage '" + row.name +
                        "' missing from config");
    double throughput = 0.0;
    for (std::size_t t = 0; t < s.horizon; ++t)
      throughput += (row.charge_kw[t] + row.discharge_kw[t]) * dt;
    out.degradation.emplace_back(row.name,
                                 dev->degradation_cost * throughput);
  }
  out.total = out.energy_purchase - out.energy_sale_revenue +
              out.degradation_total();
  return out;
}

}  // namespace hems::schedule
