// Command-line front end for the day-ahead household dispatch optimizer.
//
//   hems run <scenario> --out <dir> [--node-limit N] [--time-limit S]
//                       [--gap G] [--verify] [--mps-only]
//   hems compare <a> <b> --out <dir>
//
// `run` solves one scenario and writes model.mps, schedule.csv, soe.csv,
// grid.csv, and cost.json into the output directory. `compare` solves two
// scenarios to proven optimality and writes compare.json plus merged
// grid/soe series. Output files are deterministic for fixed inputs and
// parameters; passing --time-limit trades that determinism for a wall
// clock cap.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hems/branch_and_bound.hpp"
#include "hems/ingest.hpp"
#include "hems/milp.hpp"
#include "hems/runner.hpp"

namespace {

// Exit codes, also shown in --help.
constexpr int kExitSolved = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimitReached = 3;
constexpr int kExitBadScenario = 4;
constexpr int kExitInternal = 5;
constexpr int kExitUnbounded = 6;
constexpr int kExitVerifyFailed = 7;
constexpr int kExitCompareAborted = 8;

const char kFooter[] =
    "Exit codes:\n"
    "  0  solved (Optimal or Feasible); also --mps-only and compare success\n"
    "  1  command-line usage error\n"
    "  2  model infeasible\n"
    "  3  node or time limit reached (best-effort outputs still written\n"
    "     when an incumbent exists)\n"
    "  4  scenario failed to load or validate\n"
    "  5  internal error\n"
    "  6  model unbounded\n"
    "  7  --verify found constraint violations\n"
    "  8  comparison aborted: a side did not reach Optimal\n"
    "\n"
    "The HEMS_SEED environment variable is reserved for future stochastic\n"
    "extensions; it is read by nothing today.\n";

int status_exit_code(hems::milp::MilpStatus status) {
  using hems::milp::MilpStatus;
  switch (status) {
    case MilpStatus::Optimal:
    case MilpStatus::Feasible: return kExitSolved;
    case MilpStatus::Infeasible: return kExitInfeasible;
    case MilpStatus::Unbounded: return kExitUnbounded;
    case MilpStatus::LimitReached: return kExitLimitReached;
  }
  return kExitInternal;
}

int do_run(const std::string& scenario, const std::string& out_dir,
           const hems::runner::RunOptions& options) {
  const hems::runner::RunReport report =
      hems::runner::run_scenario(scenario, out_dir, options);
  for (const auto& note : report.provenance)
    std::fprintf(stderr, "note: %s\n", note.c_str());

  if (!report.solved) {
    std::printf("%s: exported model only\n", report.scenario.c_str());
  } else {
    const auto& sol = report.solution;
    std::printf("%s: %s after %zu nodes in %.1f s\n", report.scenario.c_str(),
                to_string(sol.status), sol.nodes_explored, sol.wall_time_s);
    if (report.cost)
      std::printf("total cost $%.9g (purchase %.9g, revenue %.9g,"
                  " degradation %.9g), gap %.3g\n",
                  report.cost->total, report.cost->energy_purchase,
                  report.cost->energy_sale_revenue,
                  report.cost->degradation_total(), sol.gap);
  }
  std::string files;
  for (const auto& f : report.manifest) files += " " + f;
  std::printf("wrote%s in %s\n", files.c_str(), out_dir.c_str());

  if (options.verify && report.solution.has_incumbent()) {
    if (report.verify_violations.empty()) {
      std::printf("verify: all variable bounds and constraints satisfied\n");
    } else {
      for (const auto& v : report.verify_violations)
        std::fprintf(stderr, "verify: %s violated by %.3g\n", v.what.c_str(),
                     v.amount);
      return kExitVerifyFailed;
    }
  }
  return report.solved ? status_exit_code(report.solution.status)
                       : kExitSolved;
}

int do_compare(const std::string& a, const std::string& b,
               const std::string& out_dir) {
  const hems::runner::CompareReport report =
      hems::runner::compare_scenarios(a, b, out_dir);
  std::printf("%s: $%.9g  %s: $%.9g  delta: $%.9g\n",
              report.scenario_a.c_str(), report.total_a,
              report.scenario_b.c_str(), report.total_b, report.delta);
  std::string files;
  for (const auto& f : report.manifest) files += " " + f;
  std::printf("wrote%s in %s\n", files.c_str(), out_dir.c_str());
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead household dispatch optimizer"};
  app.footer(kFooter);
  app.require_subcommand(1);

  std::string scenario, scenario_b, out_dir;
  hems::runner::RunOptions options;
  double time_limit = 0.0;

  CLI::App* run = app.add_subcommand("run", "Solve one scenario");
  run->add_option("scenario", scenario, "Scenario document")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* node_limit_opt = run->add_option(
      "--node-limit", options.solver.node_limit,
      "Search node budget (default keeps a desktop run under a minute)");
  CLI::Option* time_limit_opt = run->add_option(
      "--time-limit", time_limit,
      "Wall clock cap in seconds (makes outputs timing-dependent)");
  run->add_option("--gap", options.solver.gap_abs,
                  "Absolute optimality gap to stop at");
  run->add_flag("--verify", options.verify,
                "Re-check the schedule against every model constraint");
  run->add_flag("--mps-only", options.mps_only,
                "Export model.mps and exit without solving");

  CLI::App* compare =
      app.add_subcommand("compare", "Solve two scenarios side by side");
  compare->add_option("a", scenario, "First scenario")->required();
  compare->add_option("b", scenario_b, "Second scenario")->required();
  compare->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (*time_limit_opt) options.solver.time_limit_s = time_limit;
      if (*node_limit_opt && options.solver.node_limit == 0) {
        std::fprintf(stderr, "error: --node-limit must be at least 1\n");
        return 1;
      }
      return do_run(scenario, out_dir, options);
    }
    return do_compare(scenario, scenario_b, out_dir);
  } catch (const hems::runner::ComparisonAborted& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCompareAborted;
  } catch (const hems::ingest::IngestError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadScenario;
  } catch (const hems::milp::FormulationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadScenario;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
