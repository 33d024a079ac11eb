#pragma once

// Translates a ScenarioConfig into a milp::Model, one builder per
// constraint family. Tags follow the public contract
// "eq<k>.<device>.t=<t>" (one-shot rows drop the ".t=" part); "eq2_3" is
// the merged indoor-temperature recurrence, which combines the AC and
// heater ON effects into a single well-posed equality per interval.
//
// Family keys emitted per device class:
//   hvac      eq2_3 (recurrence), eq4 (mutual exclusion)
//   fridge    eq5 (recurrence)
//   appliance eq6..eq11 (start/stop logic, runtime, run-length rules)
//   pairs     eq12 (precedence), eq13 (exclusion)
//   house     eq14 (power balance)
//   storage   eq15a..eq15e, or eq16a..eq16e plus eq16h for devices with a
//             full-charge deadline (SOE limits are variable bounds)
//   pv        eq17
//   grid      eq18 (sold-power split), eq19/eq20 (transaction regulation)
//
// Comfort and temperature bands, SOE limits, window and availability
// fixings are encoded as variable bounds, not rows.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hems/domain.hpp"
#include "hems/milp.hpp"

namespace hems::formulation {

using milp::FormulationError;
using milp::Model;
using milp::Sense;
using milp::VarId;

namespace detail {

inline std::string var_name(const std::string& symbol,
                            const std::string& device, std::size_t t) {
  return symbol + "." + device + "." + std::to_string(t);
}

inline std::string tag(const std::string& family, const std::string& device,
                       std::size_t t) {
  return family + "." + device + ".t=" + std::to_string(t);
}

inline std::string tag(const std::string& family, const std::string& device) {
  return family + "." + device;
}

}  // namespace detail

struct HvacVars {
  std::vector<VarId> theta_in;  // indexed t-1
  std::vector<VarId> s_ac;
  std::vector<VarId> s_ht;
};

struct FridgeVars {
  std::vector<VarId> theta_fr;
  std::vector<VarId> s;
};

struct ApplianceVars {
  std::string name;
  double rated_kw = 0.0;
  std::vector<VarId> s, u, v;
};

struct StorageVars {
  std::string name;
  std::string family;  // "eq15" or "eq16"
  std::vector<VarId> p_ch, p_dis, p_used, p_sell, s;  // all t
  std::map<std::size_t, VarId> soe;                   // available t only
};

struct PvVars {
  std::vector<VarId> p_used, p_sell;
};

struct GridVars {
  std::vector<VarId> p_buy, p_sell, s_grid;
};

/// Accumulates the variables each builder created so later builders (the
/// power balance, the objective) can reference them.
struct BuildContext {
  std::size_t horizon = 0;
  double dt = 1.0;
  double hvac_ac_rated = 0.0;
  double hvac_ht_rated = 0.0;
  double fridge_rated = 0.0;
  std::optional<HvacVars> hvac;
  std::optional<FridgeVars> fridge;
  std::vector<ApplianceVars> appliances;
  std::vector<StorageVars> storages;
  std::optional<PvVars> pv;
  std::optional<GridVars> grid;

  const ApplianceVars* find_appliance(const std::string& name) const {
    for (const auto& a : appliances)
      if (a.name == name) return &a;
    return nullptr;
  }
};

/// Indoor temperature recurrence (eq2_3) with the comfort band as bounds,
/// plus the AC/heater exclusion (eq4). theta_in(0) is the configured
/// initial temperature, folded into the t=1 row.
inline HvacVars& add_hvac(Model& m, BuildContext& ctx, const HvacPair& hvac,
                          const Profile& theta_out, const Profile& activity) {
  const std::size_t H = ctx.horizon;
  if (theta_out.size() != H)
    throw FormulationError("outside_temperature profile length " +
                           std::to_string(theta_out.size()) +
                           " does not match horizon " + std::to_string(H));
  if (activity.size() != H)
    throw FormulationError("activity_level profile length " +
                           std::to_string(activity.size()) +
                           " does not match horizon " + std::to_string(H));
  if (!(hvac.u_ac > 0) || !(hvac.u_ht > 0))
    throw FormulationError("hvac ON-state coefficients must be positive");

  HvacVars vars;
  for (std::size_t t = 1; t <= H; ++t)
    vars.theta_in.push_back(m.add_continuous(
        detail::var_name("theta_in", "hvac", t), hvac.comfort_min,
        hvac.comfort_max));
  for (std::size_t t = 1; t <= H; ++t)
    vars.s_ac.push_back(m.add_binary(detail::var_name("s", "ac", t)));
  for (std::size_t t = 1; t <= H; ++t)
    vars.s_ht.push_back(m.add_binary(detail::var_name("s", "ht", t)));

  const double v_avg = 0.5 * (hvac.v_ac + hvac.v_ht);
  const double ins = 0.5 * (hvac.i_ac + hvac.i_ht);
  for (std::size_t t = 1; t <= H; ++t) {
    // theta(t) = theta(t-1) + v*A(t) - u_ac*s_ac + u_ht*s_ht
    //            + I*(theta_out(t) - theta(t-1))
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.theta_in[t - 1], 1.0);
    double rhs = v_avg * activity.at(t) + ins * theta_out.at(t);
    if (t == 1)
      rhs += (1.0 - ins) * hvac.theta_init;
    else
      terms.emplace_back(vars.theta_in[t - 2], -(1.0 - ins));
    terms.emplace_back(vars.s_ac[t - 1], hvac.u_ac);
    terms.emplace_back(vars.s_ht[t - 1], -hvac.u_ht);
    m.add_constraint(std::move(terms), Sense::EQ, rhs,
                     detail::tag("eq2_3", "hvac", t));
  }
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint({{vars.s_ac[t - 1], 1.0}, {vars.s_ht[t - 1], 1.0}},
                     Sense::LE, 1.0, detail::tag("eq4", "hvac", t));

  ctx.hvac = std::move(vars);
  return *ctx.hvac;
}

/// Fridge temperature recurrence (eq5); the fridge sees the house activity
/// profile. Band limits are variable bounds.
inline FridgeVars& add_fridge(Model& m, BuildContext& ctx,
                              const FridgeDevice& fridge,
                              const Profile& activity) {
  const std::size_t H = ctx.horizon;
  if (activity.size() != H)
    throw FormulationError("activity_level profile length " +
                           std::to_string(activity.size()) +
                           " does not match horizon " + std::to_string(H));

  FridgeVars vars;
  for (std::size_t t = 1; t <= H; ++t)
    vars.theta_fr.push_back(
        m.add_continuous(detail::var_name("theta_fr", "fridge", t),
                         fridge.band_min, fridge.band_max));
  for (std::size_t t = 1; t <= H; ++t)
    vars.s.push_back(m.add_binary(detail::var_name("s", "fridge", t)));

  for (std::size_t t = 1; t <= H; ++t) {
    // theta_fr(t) = theta_fr(t-1) + u_fr*A(t) - v_fr*s(t) + alpha_fr
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.theta_fr[t - 1], 1.0);
    double rhs = fridge.u_fr * activity.at(t) + fridge.alpha_fr;
    if (t == 1)
      rhs += fridge.theta_init;
    else
      terms.emplace_back(vars.theta_fr[t - 2], -1.0);
    terms.emplace_back(vars.s[t - 1], fridge.v_fr);
    m.add_constraint(std::move(terms), Sense::EQ, rhs,
                     detail::tag("eq5", "fridge", t));
  }

  ctx.fridge = std::move(vars);
  return *ctx.fridge;
}

/// Start/stop logic (eq6, eq7), total runtime over the allowed window
/// (eq8), longest-run cap (eq9), minimum up and down times (eq10, eq11).
/// s(0) = 0; ON outside the window is forbidden through bounds.
inline ApplianceVars& add_cycling_appliance(Model& m, BuildContext& ctx,
                                            const CyclingAppliance& app) {
  const std::size_t H = ctx.horizon;
  if (app.name.empty()) throw FormulationError("appliance without a name");
  if (app.required_runtime > app.allowed_window.size())
    throw FormulationError("appliance '" + app.name +
                           "': required_runtime exceeds allowed window");

  ApplianceVars vars;
  vars.name = app.name;
  vars.rated_kw = app.rated_kw;
  for (std::size_t t = 1; t <= H; ++t)
    vars.s.push_back(m.add_binary(detail::var_name("s", app.name, t)));
  for (std::size_t t = 1; t <= H; ++t)
    vars.u.push_back(m.add_binary(detail::var_name("u", app.name, t)));
  for (std::size_t t = 1; t <= H; ++t)
    vars.v.push_back(m.add_binary(detail::var_name("v", app.name, t)));

  for (std::size_t t = 1; t <= H; ++t)
    if (!app.allowed_window.count(t)) m.fix(vars.s[t - 1], 0.0);

  // eq6: u(t) - v(t) = s(t) - s(t-1), with s(0) = 0.
  for (std::size_t t = 1; t <= H; ++t) {
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.u[t - 1], 1.0);
    terms.emplace_back(vars.v[t - 1], -1.0);
    terms.emplace_back(vars.s[t - 1], -1.0);
    if (t >= 2) terms.emplace_back(vars.s[t - 2], 1.0);
    m.add_constraint(std::move(terms), Sense::EQ, 0.0,
                     detail::tag("eq6", app.name, t));
  }
  // eq7: no start and stop in the same interval.
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint({{vars.u[t - 1], 1.0}, {vars.v[t - 1], 1.0}}, Sense::LE,
                     1.0, detail::tag("eq7", app.name, t));
  // eq8: total runtime over the allowed window.
  {
    std::vector<std::pair<VarId, double>> terms;
    for (std::size_t t : app.allowed_window)
      terms.emplace_back(vars.s[t - 1], 1.0);
    std::sort(terms.begin(), terms.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    m.add_constraint(std::move(terms), Sense::EQ,
                     static_cast<double>(app.required_runtime),
                     detail::tag("eq8", app.name));
  }
  // eq9: a run starting at t may not span more than max_successive ON
  // intervals; window truncated at the horizon, M = horizon length.
  const double big_m = static_cast<double>(H);
  for (std::size_t t = 1; t <= H; ++t) {
    std::vector<std::pair<VarId, double>> terms;
    const std::size_t last = std::min(H, t + app.max_successive);
    for (std::size_t k = t; k <= last; ++k)
      terms.emplace_back(vars.s[k - 1], 1.0);
    terms.emplace_back(vars.u[t - 1], big_m);
    m.add_constraint(std::move(terms), Sense::LE,
                     static_cast<double>(app.max_successive) + big_m,
                     detail::tag("eq9", app.name, t));
  }
  // eq10: a start within the last min_up intervals keeps the device ON.
  for (std::size_t t = 1; t <= H; ++t) {
    std::vector<std::pair<VarId, double>> terms;
    const std::size_t first = t >= app.min_up ? t - app.min_up + 1 : 1;
    for (std::size_t k = first; k <= t; ++k)
      terms.emplace_back(vars.u[k - 1], 1.0);
    terms.emplace_back(vars.s[t - 1], -1.0);
    m.add_constraint(std::move(terms), Sense::LE, 0.0,
                     detail::tag("eq10", app.name, t));
  }
  // eq11: a stop within the last min_down intervals keeps the device OFF.
  for (std::size_t t = 1; t <= H; ++t) {
    std::vector<std::pair<VarId, double>> terms;
    const std::size_t first = t >= app.min_down ? t - app.min_down + 1 : 1;
    for (std::size_t k = first; k <= t; ++k)
      terms.emplace_back(vars.v[k - 1], 1.0);
    terms.emplace_back(vars.s[t - 1], 1.0);
    m.add_constraint(std::move(terms), Sense::LE, 1.0,
                     detail::tag("eq11", app.name, t));
  }

  ctx.appliances.push_back(std::move(vars));
  return ctx.appliances.back();
}

/// eq12/eq13: `second` may run only within gap_omega intervals after
/// `first` ran, and never simultaneously with it.
inline void add_precedence(Model& m, BuildContext& ctx,
                           const PrecedencePair& pair) {
  const ApplianceVars* first = ctx.find_appliance(pair.first);
  const ApplianceVars* second = ctx.find_appliance(pair.second);
  if (!first)
    throw FormulationError("precedence refers to unknown appliance '" +
                           pair.first + "'");
  if (!second)
    throw FormulationError("precedence refers to unknown appliance '" +
                           pair.second + "'");

  const std::size_t H = ctx.horizon;
  for (std::size_t t = 1; t <= H; ++t) {
    // s_second(t) <= sum_{k=1..omega} s_first(t-k); earlier-than-day-start
    // indices contribute nothing.
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(second->s[t - 1], 1.0);
    for (std::size_t k = 1; k <= pair.gap_omega && k < t; ++k)
      terms.emplace_back(first->s[t - k - 1], -1.0);
    m.add_constraint(std::move(terms), Sense::LE, 0.0,
                     detail::tag("eq12", pair.second, t));
  }
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint({{second->s[t - 1], 1.0}, {first->s[t - 1], 1.0}},
                     Sense::LE, 1.0, detail::tag("eq13", pair.second, t));
}

/// Storage fleet member. Emits the discharge split (15a/16a), rate limits
/// gated by the charge/discharge mode binary (15b/16b, 15c/16c), and the
/// SOE recurrence (15d/16d) anchored to soe_init at the start of each
/// contiguous availability run (15e/16e). SOE limits are bounds; a
/// full-charge deadline pins SOE to soe_max at that interval (16h).
/// Devices with a deadline use the eq16 family, others eq15. Outside
/// availability every variable of the device is fixed to zero.
inline StorageVars& add_storage(Model& m, BuildContext& ctx,
                                const StorageDevice& dev) {
  const std::size_t H = ctx.horizon;
  const double dt = ctx.dt;
  if (dev.availability.empty())
    throw FormulationError("storage '" + dev.name + "': empty availability");
  for (std::size_t t : dev.availability)
    if (t < 1 || t > H)
      throw FormulationError("storage '" + dev.name +
                             "': availability outside horizon");
  if (dev.full_charge_deadline &&
      !dev.availability.count(*dev.full_charge_deadline))
    throw FormulationError("storage '" + dev.name +
                           "': full_charge_deadline outside availability");

  StorageVars vars;
  vars.name = dev.name;
  vars.family = dev.full_charge_deadline ? "eq16" : "eq15";

  auto available = [&](std::size_t t) {
    return dev.availability.count(t) > 0;
  };
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_ch.push_back(m.add_continuous(
        detail::var_name("P_ch", dev.name, t), 0.0,
        available(t) && dev.can_charge_from_grid ? dev.charge_rate_kw : 0.0));
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_dis.push_back(
        m.add_continuous(detail::var_name("P_dis", dev.name, t), 0.0,
                         available(t) ? dev.discharge_rate_kw : 0.0));
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_used.push_back(m.add_continuous(
        detail::var_name("P_used", dev.name, t), 0.0,
        available(t) ? dev.discharge_rate_kw * dev.eta_discharge : 0.0));
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_sell.push_back(m.add_continuous(
        detail::var_name("P_sell", dev.name, t), 0.0,
        available(t) && dev.can_sell_to_grid
            ? dev.discharge_rate_kw * dev.eta_discharge
            : 0.0));
  for (std::size_t t = 1; t <= H; ++t) {
    VarId s = m.add_binary(detail::var_name("s", dev.name, t));
    if (!available(t)) m.fix(s, 0.0);
    vars.s.push_back(s);
  }
  for (std::size_t t = 1; t <= H; ++t)
    if (available(t))
      vars.soe.emplace(t,
                       m.add_continuous(detail::var_name("soe", dev.name, t),
                                        dev.soe_min, dev.soe_max));

  const std::string& fam = vars.family;
  for (std::size_t t = 1; t <= H; ++t) {
    if (!available(t)) continue;
    // (a) delivered power split between home use and sale.
    m.add_constraint({{vars.p_used[t - 1], 1.0},
                      {vars.p_sell[t - 1], 1.0},
                      {vars.p_dis[t - 1], -dev.eta_discharge}},
                     Sense::EQ, 0.0, detail::tag(fam + "a", dev.name, t));
    // (b)/(c) rate limits tied to the mode binary: charge when 1,
    // discharge when 0.
    m.add_constraint(
        {{vars.p_ch[t - 1], 1.0}, {vars.s[t - 1], -dev.charge_rate_kw}},
        Sense::LE, 0.0, detail::tag(fam + "b", dev.name, t));
    m.add_constraint(
        {{vars.p_dis[t - 1], 1.0}, {vars.s[t - 1], dev.discharge_rate_kw}},
        Sense::LE, dev.discharge_rate_kw, detail::tag(fam + "c", dev.name, t));
    // (d)/(e) SOE recurrence; each availability run re-anchors at soe_init.
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.soe.at(t), 1.0);
    terms.emplace_back(vars.p_ch[t - 1], -dev.eta_charge * dt);
    terms.emplace_back(vars.p_dis[t - 1], dt);
    const bool run_start = !available(t - 1) || t == 1;
    if (run_start) {
      m.add_constraint(std::move(terms), Sense::EQ, dev.soe_init,
                       detail::tag(fam + "e", dev.name, t));
    } else {
      terms.emplace_back(vars.soe.at(t - 1), -1.0);
      m.add_constraint(std::move(terms), Sense::EQ, 0.0,
                       detail::tag(fam + "d", dev.name, t));
    }
  }
  if (dev.full_charge_deadline) {
    const std::size_t t = *dev.full_charge_deadline;
    m.add_constraint({{vars.soe.at(t), 1.0}}, Sense::EQ, dev.soe_max,
                     detail::tag("eq16h", dev.name, t));
  }

  ctx.storages.push_back(std::move(vars));
  return ctx.storages.back();
}

/// eq17: generated PV power may be used on site or sold; shortfall against
/// the profile is curtailed, so the split is bounded by, not pinned to,
/// the generation.
inline PvVars& add_pv(Model& m, BuildContext& ctx, const Profile& pv) {
  const std::size_t H = ctx.horizon;
  if (pv.size() != H)
    throw FormulationError("pv_output profile length " +
                           std::to_string(pv.size()) +
                           " does not match horizon " + std::to_string(H));

  PvVars vars;
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_used.push_back(m.add_continuous(
        detail::var_name("P_used", "pv", t), 0.0, std::max(0.0, pv.at(t))));
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_sell.push_back(m.add_continuous(
        detail::var_name("P_sell", "pv", t), 0.0, std::max(0.0, pv.at(t))));
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint({{vars.p_used[t - 1], 1.0}, {vars.p_sell[t - 1], 1.0}},
                     Sense::LE, pv.at(t), detail::tag("eq17", "pv", t));

  ctx.pv = std::move(vars);
  return *ctx.pv;
}

/// eq14 power balance, eq18 sold-power split, eq19/eq20 grid transaction
/// regulation. The household load is rated power times ON status summed
/// over the AC, heater, fridge, and appliances. Requires every device
/// builder to have run already.
inline GridVars& add_grid_and_balance(Model& m, BuildContext& ctx,
                                      const GridContract& contract) {
  if (!ctx.hvac || !ctx.fridge)
    throw FormulationError(
        "add_grid_and_balance called before the device builders");
  const std::size_t H = ctx.horizon;

  GridVars vars;
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_buy.push_back(m.add_continuous(detail::var_name("P_buy", "grid", t),
                                          0.0, contract.max_buy_kw));
  for (std::size_t t = 1; t <= H; ++t)
    vars.p_sell.push_back(m.add_continuous(
        detail::var_name("P_sell", "grid", t), 0.0, contract.max_sell_kw));
  for (std::size_t t = 1; t <= H; ++t)
    vars.s_grid.push_back(m.add_binary(detail::var_name("s", "grid", t)));

  for (std::size_t t = 1; t <= H; ++t) {
    // eq14: bought power plus on-site supply covers the household load,
    // storage charging, and the power sold.
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.p_buy[t - 1], 1.0);
    if (ctx.pv) terms.emplace_back(ctx.pv->p_used[t - 1], 1.0);
    for (const auto& st : ctx.storages) {
      terms.emplace_back(st.p_used[t - 1], 1.0);
      terms.emplace_back(st.p_ch[t - 1], -1.0);
    }
    terms.emplace_back(ctx.hvac->s_ac[t - 1], -ctx.hvac_ac_rated);
    terms.emplace_back(ctx.hvac->s_ht[t - 1], -ctx.hvac_ht_rated);
    terms.emplace_back(ctx.fridge->s[t - 1], -ctx.fridge_rated);
    for (const auto& a : ctx.appliances)
      terms.emplace_back(a.s[t - 1], -a.rated_kw);
    terms.emplace_back(vars.p_sell[t - 1], -1.0);
    m.add_constraint(std::move(terms), Sense::EQ, 0.0,
                     detail::tag("eq14", "house", t));
  }
  for (std::size_t t = 1; t <= H; ++t) {
    // eq18: total sold power is what the PV and the storage fleet sell.
    std::vector<std::pair<VarId, double>> terms;
    terms.emplace_back(vars.p_sell[t - 1], 1.0);
    if (ctx.pv) terms.emplace_back(ctx.pv->p_sell[t - 1], -1.0);
    for (const auto& st : ctx.storages)
      terms.emplace_back(st.p_sell[t - 1], -1.0);
    m.add_constraint(std::move(terms), Sense::EQ, 0.0,
                     detail::tag("eq18", "grid", t));
  }
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint(
        {{vars.p_buy[t - 1], 1.0}, {vars.s_grid[t - 1], -contract.max_buy_kw}},
        Sense::LE, 0.0, detail::tag("eq19", "grid", t));
  for (std::size_t t = 1; t <= H; ++t)
    m.add_constraint(
        {{vars.p_sell[t - 1], 1.0}, {vars.s_grid[t - 1], contract.max_sell_kw}},
        Sense::LE, contract.max_sell_kw, detail::tag("eq20", "grid", t));

  ctx.grid = std::move(vars);
  return *ctx.grid;
}

/// Objective: energy purchases minus sale revenue, plus per-kWh
/// degradation on storage charge and discharge throughput. All power terms
/// are scaled by the interval length to price energy, not power.
inline void set_objective(Model& m, BuildContext& ctx,
                          const GridContract& contract,
                          const Profile& buy_price,
                          const std::vector<StorageDevice>& storages) {
  if (!ctx.grid)
    throw FormulationError("set_objective called before add_grid_and_balance");
  const std::size_t H = ctx.horizon;
  const double dt = ctx.dt;
  if (buy_price.size() != H)
    throw FormulationError("buy_price profile length does not match horizon");

  for (std::size_t t = 1; t <= H; ++t) {
    m.set_objective_coeff(ctx.grid->p_buy[t - 1], buy_price.at(t) * dt);
    m.set_objective_coeff(ctx.grid->p_sell[t - 1], -contract.sell_price * dt);
  }
  for (const auto& st : ctx.storages) {
    const StorageDevice* cfg = nullptr;
    for (const auto& d : storages)
      if (d.name == st.name) cfg = &d;
    if (!cfg)
      throw FormulationError("objective: storage '" + st.name +
                             "' missing from config");
    for (std::size_t t = 1; t <= H; ++t) {
      m.add_objective_coeff(st.p_ch[t - 1], cfg->degradation_cost * dt);
      m.add_objective_coeff(st.p_dis[t - 1], cfg->degradation_cost * dt);
    }
  }
}

/// Runs every builder in fixed order. The resulting model is a
/// deterministic function of the config: identical configs give identical
/// variable ordering, bounds, tags, and coefficients.
inline Model build(const ScenarioConfig& config, BuildContext* out_ctx = nullptr) {
  {
    auto violations = validate(config);
    if (!violations.empty()) {
      std::string msg = "invalid scenario config:";
      for (const auto& s : violations) msg += "\n  - " + s;
      throw FormulationError(msg);
    }
  }

  Model m;
  BuildContext ctx;
  ctx.horizon = config.grid.horizon_len;
  ctx.dt = config.grid.interval_hours;
  ctx.hvac_ac_rated = config.hvac.ac_rated_kw;
  ctx.hvac_ht_rated = config.hvac.ht_rated_kw;
  ctx.fridge_rated = config.fridge.rated_kw;

  add_hvac(m, ctx, config.hvac, config.outside_temperature,
           config.activity_level);
  add_fridge(m, ctx, config.fridge, config.activity_level);
  for (const auto& app : config.appliances) add_cycling_appliance(m, ctx, app);
  for (const auto& pair : config.precedences) add_precedence(m, ctx, pair);
  for (const auto& dev : config.storages) add_storage(m, ctx, dev);
  if (config.pv_enabled) add_pv(m, ctx, config.pv_output);
  add_grid_and_balance(m, ctx, config.contract);
  set_objective(m, ctx, config.contract, config.buy_price, config.storages);

  if (out_ctx) *out_ctx = std::move(ctx);
  return m;
}

}  // namespace hems::formulation
