#pragma once

// End-to-end pipelines behind the command-line tool: load a scenario,
// build and export the model, solve, decode, and emit the output files.
//
// `run` writes into its output directory:
//   model.mps     the exported program (always, even under --mps-only)
//   schedule.csv  per-interval dispatch of every device
//   soe.csv       state of energy per storage per interval
//   grid.csv      power bought and sold per interval
//   cost.json     solve summary and the cost ledger
// Schedule files appear only when the solve produced an assignment.
//
// `compare` solves two scenarios and writes compare.json plus merged
// grid_compare.csv / soe_compare.csv. It requires both solves to reach
// Optimal and aborts otherwise, reporting both statuses.
//
// Every emitted file is a deterministic function of the inputs and solver
// parameters: no timestamps, no wall-clock values, fixed float formatting
// (wall time is returned in the report for console display only). Values
// below 1e-9 in magnitude are written as 0 to keep the CSVs readable.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hems/branch_and_bound.hpp"
#include "hems/domain.hpp"
#include "hems/formulation.hpp"
#include "hems/ingest.hpp"
#include "hems/milp.hpp"
#include "hems/mps.hpp"
#include "hems/schedule.hpp"

namespace hems::runner {

class RunnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by compare_scenarios when either side fails to reach Optimal.
class ComparisonAborted : public std::runtime_error {
 public:
  ComparisonAborted(const std::string& message, milp::MilpStatus a,
                    milp::MilpStatus b)
      : std::runtime_error(message), status_a(a), status_b(b) {}
  milp::MilpStatus status_a;
  milp::MilpStatus status_b;
};

/// The solver itself defaults to an effectively unbounded node budget; the
/// pipeline instead caps the tree so a desktop run of the shipped
/// scenarios finishes within a minute and two runs of the same inputs
/// visit exactly the same nodes. Raise via --node-limit when a tighter
/// gap is worth the wait.
inline constexpr std::size_t kDefaultNodeBudget = 250;

struct RunOptions {
  milp::BnbParams solver;
  bool verify = false;
  bool mps_only = false;

  RunOptions() { solver.node_limit = kDefaultNodeBudget; }
};

struct RunReport {
  std::string scenario;
  std::vector<std::string> provenance;  // defaults applied during load
  milp::MilpSolution solution;
  bool solved = false;  // false under --mps-only
  std::optional<schedule::Schedule> dispatch;
  std::optional<schedule::CostBreakdown> cost;
  std::vector<milp::Violation> verify_violations;
  std::vector<std::string> manifest;  // files written, in emission order
};

struct CompareReport {
  std::string scenario_a, scenario_b;
  milp::MilpStatus status_a, status_b;
  double total_a = 0.0, total_b = 0.0;
  double delta = 0.0;  // total_a - total_b: positive means b is cheaper
  std::vector<std::string> manifest;
};

namespace detail {

inline double clean(double v) { return std::abs(v) < 1e-9 ? 0.0 : v; }

inline std::string csv_num(double v) {
  return ingest::detail::fmt_double(clean(v));
}

class FileSink {
 public:
  FileSink(const std::filesystem::path& dir, std::vector<std::string>& manifest)
      : dir_(dir), manifest_(manifest) {}

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out)
      throw RunnerError("cannot write '" + (dir_ / name).string() + "'");
    out << content;
    if (!out)
      throw RunnerError("write failed for '" + (dir_ / name).string() + "'");
    manifest_.push_back(name);
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string>& manifest_;
};

inline std::string render_schedule_csv(const schedule::Schedule& s) {
  std::string out = "interval,ac_on,ht_on,fridge_on,theta_in_c,theta_fr_c";
  for (const auto& a : s.appliances) out += "," + a.name + "_on";
  for (const auto& st : s.storages)
    out += "," + st.name + "_charge_kw," + st.name + "_discharge_kw," +
           st.name + "_used_kw," + st.name + "_sold_kw";
  if (!s.pv_used_kw.empty()) out += ",pv_used_kw,pv_sold_kw";
  out += ",buy_kw,sell_kw,grid_buy_mode\n";
  for (std::size_t t = 0; t < s.horizon; ++t) {
    out += std::to_string(t + 1);
    out += "," + std::to_string(s.ac_on[t]);
    out += "," + std::to_string(s.ht_on[t]);
    out += "," + std::to_string(s.fridge_on[t]);
    out += "," + csv_num(s.theta_in_c[t]);
    out += "," + csv_num(s.theta_fr_c[t]);
    for (const auto& a : s.appliances) out += "," + std::to_string(a.on[t]);
    for (const auto& st : s.storages) {
      out += "," + csv_num(st.charge_kw[t]);
      out += "," + csv_num(st.discharge_kw[t]);
      out += "," + csv_num(st.used_kw[t]);
      out += "," + csv_num(st.sold_kw[t]);
    }
    if (!s.pv_used_kw.empty()) {
      out += "," + csv_num(s.pv_used_kw[t]);
      out += "," + csv_num(s.pv_sold_kw[t]);
    }
    out += "," + csv_num(s.buy_kw[t]);
    out += "," + csv_num(s.sell_kw[t]);
    out += "," + std::to_string(s.grid_buy_mode[t]);
    out += "\n";
  }
  return out;
}

inline std::string render_soe_csv(const schedule::Schedule& s) {
  std::string out = "interval";
  for (const auto& st : s.storages) out += "," + st.name + "_soe_kwh";
  out += "\n";
  for (std::size_t t = 0; t < s.horizon; ++t) {
    out += std::to_string(t + 1);
    for (const auto& st : s.storages) {
      out += ",";
      if (st.soe_kwh[t]) out += csv_num(*st.soe_kwh[t]);
    }
    out += "\n";
  }
  return out;
}

inline std::string render_grid_csv(const schedule::Schedule& s) {
  std::string out = "interval,buy_kw,sell_kw\n";
  for (std::size_t t = 0; t < s.horizon; ++t)
    out += std::to_string(t + 1) + "," + csv_num(s.buy_kw[t]) + "," +
           csv_num(s.sell_kw[t]) + "\n";
  return out;
}

inline std::string render_cost_json(const RunReport& report) {
  nlohmann::json j;
  j["scenario"] = report.scenario;
  j["status"] = to_string(report.solution.status);
  j["nodes_explored"] = report.solution.nodes_explored;
  if (report.solution.has_incumbent()) {
    j["objective"] = report.solution.objective;
    j["gap"] = report.solution.gap;
  }
  if (report.cost) {
    nlohmann::json deg(nlohmann::json::value_t::object);
    for (const auto& [name, d] : report.cost->degradation) deg[name] = d;
    j["breakdown"] = {
        {"energy_purchase", report.cost->energy_purchase},
        {"energy_sale_revenue", report.cost->energy_sale_revenue},
        {"degradation", deg},
        {"total", report.cost->total},
    };
  }
  return j.dump(2) + "\n";
}

}  // namespace detail

/// Loads, builds, exports, solves, decodes, and writes one scenario run.
/// The returned report mirrors exactly what was written. Throws
/// ingest/formulation/solver/runner errors; solver outcomes (Infeasible,
/// LimitReached, ...) are reported, not thrown.
inline RunReport run_scenario(const std::filesystem::path& scenario_path,
                              const std::filesystem::path& out_dir,
                              const RunOptions& options = {}) {
  std::filesystem::create_directories(out_dir);

  RunReport report;
  const ScenarioConfig config =
      ingest::load_scenario(scenario_path, &report.provenance);
  report.scenario = config.name;

  const milp::Model model = formulation::build(config);
  detail::FileSink sink(out_dir, report.manifest);
  sink.write("model.mps", milp::export_mps(model, config.name));
  if (options.mps_only) return report;

  report.solution = milp::branch_and_bound(model, options.solver);
  report.solved = true;
  if (report.solution.has_incumbent()) {
    report.dispatch = schedule::extract_schedule(report.solution, model, config);
    report.cost = schedule::compute_cost(*report.dispatch, config);
    const double drift =
        std::abs(report.cost->total - report.solution.objective);
    if (drift > 1e-6)
      throw RunnerError("cost ledger drifts from objective by " +
                        ingest::detail::fmt_double(drift));
    sink.write("schedule.csv", detail::render_schedule_csv(*report.dispatch));
    sink.write("soe.csv", detail::render_soe_csv(*report.dispatch));
    sink.write("grid.csv", detail::render_grid_csv(*report.dispatch));
  }
  sink.write("cost.json", detail::render_cost_json(report));

  if (options.verify && report.solution.has_incumbent())
    report.verify_violations = milp::check_assignment(
        model, report.solution.assignment, options.solver.feas_tol * 10.0,
        options.solver.int_tol);
  return report;
}

namespace detail {

inline std::string render_compare_json(const CompareReport& r) {
  nlohmann::json j;
  j["a"] = {{"scenario", r.scenario_a},
            {"status", to_string(r.status_a)},
            {"total", r.total_a}};
  j["b"] = {{"scenario", r.scenario_b},
            {"status", to_string(r.status_b)},
            {"total", r.total_b}};
  j["delta"] = r.delta;
  return j.dump(2) + "\n";
}

inline std::string render_grid_compare_csv(const schedule::Schedule& a,
                                           const schedule::Schedule& b) {
  std::string out = "interval,a_buy_kw,a_sell_kw,b_buy_kw,b_sell_kw\n";
  const std::size_t H = a.horizon;
  for (std::size_t t = 0; t < H; ++t) {
    out += std::to_string(t + 1);
    out += "," + csv_num(a.buy_kw[t]) + "," + csv_num(a.sell_kw[t]);
    out += "," + (t < b.horizon ? csv_num(b.buy_kw[t]) : std::string());
    out += "," + (t < b.horizon ? csv_num(b.sell_kw[t]) : std::string());
    out += "\n";
  }
  return out;
}

inline std::string render_soe_compare_csv(const schedule::Schedule& a,
                                          const schedule::Schedule& b) {
  std::string out = "interval";
  for (const auto& st : a.storages) out += ",a_" + st.name + "_soe_kwh";
  for (const auto& st : b.storages) out += ",b_" + st.name + "_soe_kwh";
  out += "\n";
  for (std::size_t t = 0; t < a.horizon; ++t) {
    out += std::to_string(t + 1);
    for (const auto& st : a.storages) {
      out += ",";
      if (st.soe_kwh[t]) out += csv_num(*st.soe_kwh[t]);
    }
    for (const auto& st : b.storages) {
      out += ",";
      if (t < b.horizon && st.soe_kwh[t]) out += csv_num(*st.soe_kwh[t]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace detail

/// Solves both scenarios with the same options and writes the side-by-side
/// outputs. Both solves must reach Optimal; any other pair of outcomes
/// aborts the comparison via ComparisonAborted naming both statuses.
inline CompareReport compare_scenarios(
    const std::filesystem::path& scenario_a,
    const std::filesystem::path& scenario_b,
    const std::filesystem::path& out_dir, const RunOptions& options = {}) {
  std::filesystem::create_directories(out_dir);

  struct Side {
    ScenarioConfig config;
    milp::MilpSolution solution;
    std::optional<schedule::Schedule> dispatch;
    std::optional<schedule::CostBreakdown> cost;
  };
  auto solve_side = [&](const std::filesystem::path& path) {
    Side side;
    side.config = ingest::load_scenario(path);
    const milp::Model model = formulation::build(side.config);
    side.solution = milp::branch_and_bound(model, options.solver);
    if (side.solution.status == milp::MilpStatus::Optimal) {
      side.dispatch =
          schedule::extract_schedule(side.solution, model, side.config);
      side.cost = schedule::compute_cost(*side.dispatch, side.config);
    }
    return side;
  };

  const Side a = solve_side(scenario_a);
  const Side b = solve_side(scenario_b);

  CompareReport report;
  report.scenario_a = a.config.name;
  report.scenario_b = b.config.name;
  report.status_a = a.solution.status;
  report.status_b = b.solution.status;
  if (a.solution.status != milp::MilpStatus::Optimal ||
      b.solution.status != milp::MilpStatus::Optimal)
    throw ComparisonAborted(
        "comparison aborted: '" + a.config.name + "' finished " +
            to_string(a.solution.status) + ", '" + b.config.name +
            "' finished " + to_string(b.solution.status) +
            "; both must reach Optimal",
        a.solution.status, b.solution.status);

  report.total_a = a.cost->total;
  report.total_b = b.cost->total;
  report.delta = report.total_a - report.total_b;

  detail::FileSink sink(out_dir, report.manifest);
  sink.write("compare.json", detail::render_compare_json(report));
  sink.write("grid_compare.csv",
             detail::render_grid_compare_csv(*a.dispatch, *b.dispatch));
  sink.write("soe_compare.csv",
             detail::render_soe_compare_csv(*a.dispatch, *b.dispatch));
  return report;
}

}  // namespace hems::runner
