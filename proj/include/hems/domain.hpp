#pragma once

// Scenario, device, and profile types for the day-ahead household
// optimizer. Pure data plus validation; no optimization logic here.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hems {

/// Discretization of the planning day. Intervals are 1-based: interval t
/// covers clock hours [t-1, t). With the default 24 x 1h grid, interval 19
/// is 18:00-19:00, so "arrives at 6pm" means available from interval 19.
struct TimeGrid {
  std::size_t horizon_len = 24;
  double interval_hours = 1.0;
};

enum class ProfileKind {
  OutsideTemperature,  // degrees C
  ActivityLevel,       // fraction in [0,1]
  BuyPrice,            // $/kWh
  PvOutput,            // kW
};

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::OutsideTemperature: return "outside_temperature";
    case ProfileKind::ActivityLevel: return "activity_level";
    case ProfileKind::BuyPrice: return "buy_price";
    case ProfileKind::PvOutput: return "pv_output";
  }
  return "?";
}

/// Fixed-length per-interval series; values[t-1] belongs to interval t.
struct Profile {
  ProfileKind kind = ProfileKind::OutsideTemperature;
  std::vector<double> values;

  double at(std::size_t t) const { return values.at(t - 1); }
  std::size_t size() const { return values.size(); }
};

/// AC/heater pair acting on one indoor temperature state.
/// v_* and I_* shape the OFF-state drift, u_* is the ON-state effect per
/// interval (AC cools, heater warms).
struct HvacPair {
  double ac_rated_kw = 1.9;
  double ht_rated_kw = 1.5;
  double v_ac = 0.5;
  double v_ht = 0.5;
  double u_ac = 2.0;
  double u_ht = 2.0;
  double i_ac = 0.2;  // insulation coefficient, 0..1
  double i_ht = 0.2;
  double theta_init = 22.0;
  double comfort_min = 20.0;
  double comfort_max = 24.0;
};

struct FridgeDevice {
  double rated_kw = 0.42;
  double u_fr = 1.0;      // warming per unit activity
  double v_fr = 1.5;      // cooling while ON
  double alpha_fr = 0.5;  // OFF-state warming per interval
  double theta_init = 4.0;
  double band_min = 2.0;
  double band_max = 6.0;
};

/// Shiftable appliance with unit-commitment style run rules.
struct CyclingAppliance {
  std::string name;
  double rated_kw = 0.5;
  std::size_t required_runtime = 1;   // total ON intervals demanded
  std::size_t max_successive = 1;     // longest allowed run
  std::size_t min_up = 1;
  std::size_t min_down = 1;
  std::set<std::size_t> allowed_window;  // intervals where ON is permitted
};

/// Orders one appliance after another: `second` may be ON at t only if
/// `first` was ON within the previous gap_omega intervals.
struct PrecedencePair {
  std::string first;
  std::string second;
  std::size_t gap_omega = 1;
};

/// Battery-style device; covers both the stationary unit and the vehicle.
/// A rate of 0 disables that direction. Intervals outside `availability`
/// force every variable of the device to zero.
struct StorageDevice {
  std::string name;
  double capacity_kwh = 0.0;
  double soe_init = 0.0;
  double soe_min = 0.0;
  double soe_max = 0.0;
  double charge_rate_kw = 0.0;
  double discharge_rate_kw = 0.0;
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  double degradation_cost = 0.0;  // $/kWh on charge and discharge throughput
  std::set<std::size_t> availability;
  std::optional<std::size_t> full_charge_deadline;
  bool can_sell_to_grid = false;
  bool can_charge_from_grid = true;
};

struct GridContract {
  double sell_price = 0.0;  // flat $/kWh
  double max_buy_kw = 10.0;
  double max_sell_kw = 0.0;
};

struct ScenarioConfig {
  std::string name;
  TimeGrid grid;
  Profile outside_temperature;
  Profile activity_level;
  Profile buy_price;
  Profile pv_output;
  HvacPair hvac;
  FridgeDevice fridge;
  std::vector<CyclingAppliance> appliances;
  std::vector<PrecedencePair> precedences;
  std::vector<StorageDevice> storages;
  bool pv_enabled = false;
  GridContract contract;
};

namespace detail {

inline bool finite(double v) { return std::isfinite(v); }

class ViolationSink {
 public:
  explicit ViolationSink(std::vector<std::string>& out) : out_(out) {}
  void require(bool ok, const std::string& message) {
    if (!ok) out_.push_back(message);
  }

 private:
  std::vector<std::string>& out_;
};

}  // namespace detail

/// Collects every invariant violation in declaration order. An empty result
/// means the config is valid. Pure: no side effects, deterministic order.
inline std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> out;
  detail::ViolationSink v(out);
  const std::size_t H = c.grid.horizon_len;

  v.require(H >= 1, "grid.horizon_len: must be >= 1");
  v.require(c.grid.interval_hours > 0, "grid.interval_hours: must be > 0");

  auto check_profile = [&](const Profile& p, ProfileKind kind,
                           const std::string& field) {
    v.require(p.kind == kind, field + ": wrong profile kind");
    v.require(p.size() == H,
              field + ": length " + std::to_string(p.size()) +
                  " != horizon " + std::to_string(H));
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const double x = p.values[i];
      const std::string where =
          field + "[" + std::to_string(i + 1) + "]";
      v.require(detail::finite(x), where + ": not finite");
      if (!detail::finite(x)) continue;
      switch (kind) {
        case ProfileKind::ActivityLevel:
          v.require(x >= 0.0 && x <= 1.0, where + ": must lie in [0,1]");
          break;
        case ProfileKind::BuyPrice:
          v.require(x >= 0.0, where + ": must be >= 0");
          break;
        case ProfileKind::PvOutput:
          v.require(x >= 0.0, where + ": must be >= 0");
          break;
        case ProfileKind::OutsideTemperature:
          break;
      }
    }
  };
  check_profile(c.outside_temperature, ProfileKind::OutsideTemperature,
                "profiles.outside_temperature");
  check_profile(c.activity_level, ProfileKind::ActivityLevel,
                "profiles.activity_level");
  check_profile(c.buy_price, ProfileKind::BuyPrice, "profiles.buy_price");
  if (c.pv_enabled)
    check_profile(c.pv_output, ProfileKind::PvOutput, "profiles.pv_output");

  v.require(c.hvac.ac_rated_kw > 0, "hvac.ac_rated_kw: must be > 0");
  v.require(c.hvac.ht_rated_kw > 0, "hvac.ht_rated_kw: must be > 0");
  v.require(c.hvac.u_ac > 0, "hvac.u_ac: must be > 0");
  v.require(c.hvac.u_ht > 0, "hvac.u_ht: must be > 0");
  v.require(c.hvac.i_ac >= 0 && c.hvac.i_ac <= 1,
            "hvac.i_ac: must lie in [0,1]");
  v.require(c.hvac.i_ht >= 0 && c.hvac.i_ht <= 1,
            "hvac.i_ht: must lie in [0,1]");
  v.require(c.hvac.comfort_min < c.hvac.comfort_max,
            "hvac.comfort_min: must be < comfort_max");

  v.require(c.fridge.rated_kw > 0, "fridge.rated_kw: must be > 0");
  v.require(c.fridge.v_fr > 0, "fridge.v_fr: must be > 0");
  v.require(c.fridge.alpha_fr > 0, "fridge.alpha_fr: must be > 0");
  v.require(c.fridge.band_min < c.fridge.band_max,
            "fridge.band_min: must be < band_max");

  auto valid_name = [](const std::string& n) {
    if (n.empty()) return false;
    for (char ch : n)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        return false;
    return true;
  };
  // Names become variable/tag segments, so they must be identifiers and
  // must not shadow the built-in device names.
  const std::set<std::string> reserved = {"ac",  "ht",   "hvac", "fridge",
                                          "pv",  "grid", "house"};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < c.appliances.size(); ++i) {
    const auto& a = c.appliances[i];
    const std::string field = "appliances[" + std::to_string(i) + "]";
    v.require(valid_name(a.name), field + ".name: must be an identifier");
    v.require(!reserved.count(a.name), field + ".name: reserved name");
    v.require(seen.insert(a.name).second, field + ".name: duplicate");
    v.require(a.rated_kw > 0, field + ".rated_kw: must be > 0");
    v.require(a.required_runtime >= 1,
              field + ".required_runtime: must be >= 1");
    v.require(a.required_runtime <= a.allowed_window.size(),
              field + ".required_runtime: exceeds allowed_window size");
    v.require(a.min_up <= a.max_successive,
              field + ".min_up: must be <= max_successive");
    v.require(a.max_successive >= 1, field + ".max_successive: must be >= 1");
    v.require(a.min_down >= 1, field + ".min_down: must be >= 1");
    for (std::size_t t : a.allowed_window)
      v.require(t >= 1 && t <= H,
                field + ".allowed_window: interval " + std::to_string(t) +
                    " outside horizon");
  }

  auto has_appliance = [&](const std::string& n) {
    for (const auto& a : c.appliances)
      if (a.name == n) return true;
    return false;
  };
  for (std::size_t i = 0; i < c.precedences.size(); ++i) {
    const auto& p = c.precedences[i];
    const std::string field = "precedences[" + std::to_string(i) + "]";
    v.require(p.gap_omega >= 1, field + ".gap_omega: must be >= 1");
    v.require(p.first != p.second, field + ": first == second");
    v.require(has_appliance(p.first),
              field + ".first: unknown appliance '" + p.first + "'");
    v.require(has_appliance(p.second),
              field + ".second: unknown appliance '" + p.second + "'");
  }

  for (std::size_t i = 0; i < c.storages.size(); ++i) {
    const auto& s = c.storages[i];
    const std::string field = "storages[" + std::to_string(i) + "]";
    v.require(valid_name(s.name), field + ".name: must be an identifier");
    v.require(!reserved.count(s.name), field + ".name: reserved name");
    v.require(seen.insert(s.name).second, field + ".name: duplicate");
    v.require(s.soe_min >= 0, field + ".soe_min: must be >= 0");
    v.require(s.soe_min <= s.soe_init,
              field + ".soe_init: must be >= soe_min");
    v.require(s.soe_init <= s.soe_max,
              field + ".soe_init: must be <= soe_max");
    v.require(s.soe_max <= s.capacity_kwh,
              field + ".soe_max: must be <= capacity_kwh");
    // A rate of exactly 0 disables the direction (used by the
    // charge-only vehicle); negative rates are invalid.
    v.require(s.charge_rate_kw >= 0, field + ".charge_rate_kw: must be >= 0");
    v.require(s.discharge_rate_kw >= 0,
              field + ".discharge_rate_kw: must be >= 0");
    v.require(s.eta_charge > 0 && s.eta_charge <= 1,
              field + ".eta_charge: must lie in (0,1]");
    v.require(s.eta_discharge > 0 && s.eta_discharge <= 1,
              field + ".eta_discharge: must lie in (0,1]");
    v.require(s.degradation_cost >= 0,
              field + ".degradation_cost: must be >= 0");
    v.require(!s.availability.empty(), field + ".availability: empty");
    for (std::size_t t : s.availability)
      v.require(t >= 1 && t <= H,
                field + ".availability: interval " + std::to_string(t) +
                    " outside horizon");
    if (s.full_charge_deadline) {
      v.require(s.availability.count(*s.full_charge_deadline) > 0,
                field + ".full_charge_deadline: outside availability");
    }
  }

  v.require(c.contract.sell_price >= 0, "contract.sell_price: must be >= 0");
  v.require(c.contract.max_buy_kw > 0, "contract.max_buy_kw: must be > 0");
  v.require(c.contract.max_sell_kw >= 0,
            "contract.max_sell_kw: must be >= 0");

  return out;
}

}  // namespace hems
