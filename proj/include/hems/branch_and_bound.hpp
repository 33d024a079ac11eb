#pragma once

// Best-first branch-and-bound over the binary variables of a model.
//
// Node order: lowest parent LP bound first, then deepest, then lowest id,
// so runs are reproducible. Branching variable: the most fractional
// binary, ties broken by lowest VarId. Each node stores only its single
// bound change plus a parent link; bounds are rebuilt by walking the
// chain. Before solving, a node runs activity-based bound propagation
// over the rows to fix implied binaries (the only presolve performed);
// the LP engine then substitutes everything fixed out of the row set.
//
// Integer-feasible nodes are polished: all binaries are pinned to their
// rounded values and the continuous part is re-solved, so incumbents
// carry exact 0/1 entries. The root node additionally seeds the incumbent
// with a deterministic primal heuristic (a two-sided dive followed by a
// budgeted local search over flips and nearby swaps) so the search can
// prune and report a meaningful gap from the start.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hems/milp.hpp"
#include "hems/simplex.hpp"

namespace hems::milp {

struct BnbParams {
  double int_tol = 1e-6;
  double feas_tol = 1e-7;
  double gap_abs = 1e-6;
  std::size_t node_limit = 1000000;
  std::optional<double> time_limit_s;
  SimplexParams lp;
};

enum class MilpStatus { Optimal, Feasible, Infeasible, Unbounded, LimitReached };

inline const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Feasible: return "Feasible";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Unbounded: return "Unbounded";
    case MilpStatus::LimitReached: return "LimitReached";
  }
  return "?";
}

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> assignment;  // empty when no incumbent exists
  double gap = 0.0;                // bound slack accepted by the stop rule
  std::size_t nodes_explored = 0;
  double wall_time_s = 0.0;

  bool has_incumbent() const { return !assignment.empty(); }
};

namespace detail {

class BnbSearch {
 public:
  BnbSearch(const Model& model, const BnbParams& params)
      : model_(model), params_(params) {
    for (std::size_t j = 0; j < model.num_vars(); ++j)
      if (model.var(VarId{j}).kind == VarKind::Binary)
        binaries_.push_back(j);
    root_lo_.resize(model.num_vars());
    root_up_.resize(model.num_vars());
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
      root_lo_[j] = model.var(VarId{j}).lower;
      root_up_[j] = model.var(VarId{j}).upper;
    }
  }

  MilpSolution run() {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
          .count();
    };

    nodes_.push_back(Node{-kInf, 0, -1, 0, 0.0});
    frontier_.push(Entry{-kInf, 0, 0});

    MilpSolution out;
    bool limit_hit = false;
    std::vector<double> lo, up;
    while (!frontier_.empty()) {
      if (out.nodes_explored >= params_.node_limit ||
          (params_.time_limit_s && elapsed() > *params_.time_limit_s)) {
        limit_hit = true;
        break;
      }
      const Entry e = frontier_.top();
      frontier_.pop();
      if (have_incumbent_ && e.bound >= incumbent_z_ - params_.gap_abs) {
        note_pruned(e.bound);
        continue;
      }

      materialize(e.node, lo, up);
      if (!propagate(lo, up)) continue;

      LpSolution lp = solve_lp(model_, lo, up, params_.lp);
      ++out.nodes_explored;
      if (lp.status == LpStatus::Infeasible) continue;
      if (lp.status == LpStatus::Unbounded) {
        out.status = MilpStatus::Unbounded;
        out.wall_time_s = elapsed();
        return out;
      }
      const double z = lp.objective;
      if (have_incumbent_ && z >= incumbent_z_ - params_.gap_abs) {
        note_pruned(z);
        continue;
      }

      const std::size_t frac = most_fractional(lp.assignment);
      if (frac == kNoVar) {
        offer_incumbent(lp, lo, up);
        continue;
      }
      if (e.node == 0 && !have_incumbent_) rounding_probe(lp, lo, up);
      if (have_incumbent_ && z >= incumbent_z_ - params_.gap_abs) {
        note_pruned(z);
        continue;
      }

      for (int fix_to = 0; fix_to <= 1; ++fix_to) {
        const std::int64_t idx = static_cast<std::int64_t>(nodes_.size());
        nodes_.push_back(Node{z, e.depth + 1, e.node,
                              static_cast<std::uint32_t>(frac),
                              static_cast<double>(fix_to)});
        frontier_.push(Entry{z, e.depth + 1, idx});
      }
    }

    out.wall_time_s = elapsed();
    if (limit_hit) {
      out.status = MilpStatus::LimitReached;
      if (have_incumbent_) {
        out.objective = incumbent_z_;
        out.assignment = incumbent_;
        out.gap = std::max(0.0, incumbent_z_ - frontier_floor());
      }
      return out;
    }
    if (!have_incumbent_) {
      out.status = MilpStatus::Infeasible;
      return out;
    }
    out.objective = incumbent_z_;
    out.assignment = incumbent_;
    out.gap = std::max(0.0, incumbent_z_ - pruned_floor_);
    out.status = out.gap > 1e-6 ? MilpStatus::Feasible : MilpStatus::Optimal;
    if (out.status == MilpStatus::Optimal) out.gap = 0.0;
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr std::size_t kNoVar = static_cast<std::size_t>(-1);

  struct Node {
    double bound;          // parent LP bound when created
    std::uint32_t depth;
    std::int64_t parent;   // -1 for the root
    std::uint32_t var;     // branched variable (unused on the root)
    double value;          // fixed value of that variable
  };
  struct Entry {
    double bound;
    std::uint32_t depth;
    std::int64_t node;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.node > b.node;
    }
  };

  void materialize(std::int64_t idx, std::vector<double>& lo,
                   std::vector<double>& up) const {
    lo = root_lo_;
    up = root_up_;
    for (std::int64_t k = idx; k > 0; k = nodes_[k].parent) {
      lo[nodes_[k].var] = nodes_[k].value;
      up[nodes_[k].var] = nodes_[k].value;
    }
  }

  // Fixes binaries whose value is implied by row activity bounds given
  // the current boxes. Returns false when a row or box is proven empty.
  bool propagate(std::vector<double>& lo, std::vector<double>& up) const {
    const double tol = params_.feas_tol;
    for (int pass = 0; pass < 10; ++pass) {
      bool changed = false;
      for (const auto& row : model_.constraints()) {
        double min_act = 0.0, max_act = 0.0;
        for (const auto& [id, c] : row.terms) {
          min_act += c > 0 ? c * lo[id.index] : c * up[id.index];
          max_act += c > 0 ? c * up[id.index] : c * lo[id.index];
        }
        const double slack = tol * (1.0 + std::abs(row.rhs));
        if (row.sense != Sense::GE && min_act > row.rhs + slack) return false;
        if (row.sense != Sense::LE && max_act < row.rhs - slack) return false;
        for (const auto& [id, c] : row.terms) {
          const std::size_t j = id.index;
          if (std::abs(c) < 1e-12) continue;  // inert term, avoid dividing
          if (model_.var(id).kind != VarKind::Binary) continue;
          if (up[j] - lo[j] < 0.5) continue;  // already fixed
          const double lo_c = c > 0 ? c * lo[j] : c * up[j];
          const double hi_c = c > 0 ? c * up[j] : c * lo[j];
          // Implied value range of this term inside the row.
          double term_max = kInf, term_min = -kInf;
          if (row.sense != Sense::GE)  // LE or EQ caps the activity above
            term_max = row.rhs - (min_act - lo_c);
          if (row.sense != Sense::LE)  // GE or EQ caps it below
            term_min = row.rhs - (max_act - hi_c);
          double vlo = -kInf, vup = kInf;
          if (c > 0) {
            vup = term_max / c;
            vlo = term_min / c;
          } else {
            vup = term_min / c;
            vlo = term_max / c;
          }
          if (vup < 1.0 - 1e-6 && vlo > 1e-6) return false;
          if (vup < 1.0 - 1e-6 && up[j] > 0.5) {
            if (vup < -1e-6) return false;
            up[j] = 0.0;
            changed = true;
          } else if (vlo > 1e-6 && lo[j] < 0.5) {
            if (vlo > 1.0 + 1e-6) return false;
            lo[j] = 1.0;
            changed = true;
          }
          if (lo[j] > up[j]) return false;
        }
      }
      if (!changed) return true;
    }
    return true;
  }

  std::size_t most_fractional(const std::vector<double>& x) const {
    std::size_t best = kNoVar;
    double best_frac = params_.int_tol;
    for (std::size_t j : binaries_) {
      const double f = std::min(x[j] - std::floor(x[j]),
                                std::ceil(x[j]) - x[j]);
      if (f > best_frac) {
        best_frac = f;
        best = j;
      }
    }
    return best;
  }

  // Re-solves the continuous part with every binary pinned to its rounded
  // value so the incumbent carries exact 0/1 entries. The stored objective
  // is always recomputed against the real cost vector, so callers may hand
  // in solutions of auxiliary LPs.
  void offer_incumbent(const LpSolution& node_lp, std::vector<double> lo,
                       std::vector<double> up) {
    for (std::size_t j : binaries_) {
      const double r = node_lp.assignment[j] >= 0.5 ? 1.0 : 0.0;
      lo[j] = up[j] = r;
    }
    LpSolution polished = solve_lp(model_, std::move(lo), std::move(up),
                                   params_.lp);
    const std::vector<double>& pick = polished.status == LpStatus::Optimal
                                          ? polished.assignment
                                          : node_lp.assignment;
    const double z = model_.objective_value(pick);
    if (!have_incumbent_ || z < incumbent_z_) {
      have_incumbent_ = true;
      incumbent_z_ = z;
      incumbent_ = pick;
    }
  }

  // Pins every binary to the given 0/1 values on top of the root boxes and
  // re-solves the continuous remainder. Returns the repaired solution when
  // the pinned problem is feasible.
  std::optional<LpSolution> eval_pinned(const std::vector<double>& binvals) {
    std::vector<double> lo = root_lo_, up = root_up_;
    for (std::size_t j : binaries_) lo[j] = up[j] = binvals[j];
    if (!propagate(lo, up)) return std::nullopt;
    LpSolution lp = solve_lp(model_, std::move(lo), std::move(up), params_.lp);
    if (lp.status != LpStatus::Optimal) return std::nullopt;
    return lp;
  }

  void store_incumbent(double z, std::vector<double> x) {
    if (!have_incumbent_ || z < incumbent_z_) {
      have_incumbent_ = true;
      incumbent_z_ = z;
      incumbent_ = std::move(x);
    }
  }

  // Root primal heuristic, stage one: a two-sided dive. Repeatedly takes
  // the lowest-indexed fractional binary (variable ids follow model build
  // order, so this walks each device family forward in time), solves the
  // LP with the variable pinned each way, and commits to the cheaper
  // feasible side. Stage two: a budgeted best-improvement local search
  // around the dive result over single flips and opposite-value swaps of
  // nearby binaries, each candidate repaired by a pinned re-solve.
  // Deterministic throughout.
  void rounding_probe(const LpSolution& root_lp, const std::vector<double>& lo,
                      const std::vector<double>& up) {
    std::vector<double> dlo = lo, dup = up;
    LpSolution cur = root_lp;
    for (std::size_t step = 0; step <= binaries_.size(); ++step) {
      std::size_t pick = kNoVar;
      for (std::size_t j : binaries_) {
        const double x = cur.assignment[j];
        if (std::min(x - std::floor(x), std::ceil(x) - x) > params_.int_tol) {
          pick = j;
          break;
        }
      }
      if (pick == kNoVar) break;
      struct Side {
        std::vector<double> lo, up;
        LpSolution lp;
      };
      std::optional<Side> chosen;
      for (int v = 0; v <= 1; ++v) {
        std::vector<double> tlo = dlo, tup = dup;
        tlo[pick] = tup[pick] = static_cast<double>(v);
        if (!propagate(tlo, tup)) continue;
        LpSolution lp = solve_lp(model_, tlo, tup, params_.lp);
        if (lp.status != LpStatus::Optimal) continue;
        if (!chosen || lp.objective < chosen->lp.objective)
          chosen = Side{std::move(tlo), std::move(tup), std::move(lp)};
      }
      if (!chosen) return;  // dead end: leave seeding to the tree search
      dlo = std::move(chosen->lo);
      dup = std::move(chosen->up);
      cur = std::move(chosen->lp);
    }

    std::vector<double> binv(model_.num_vars(), 0.0);
    for (std::size_t j : binaries_)
      binv[j] = cur.assignment[j] >= 0.5 ? 1.0 : 0.0;
    auto seed = eval_pinned(binv);
    if (!seed) return;
    store_incumbent(seed->objective, seed->assignment);

    int budget = 900;  // pinned re-solves allowed for the polish stage
    while (budget > 0) {
      double best_z = incumbent_z_;
      std::vector<double> best_bin;
      auto consider = [&](const std::vector<double>& cand) {
        if (budget <= 0) return;
        --budget;
        if (auto r = eval_pinned(cand)) {
          if (r->objective < best_z - 1e-9) {
            best_z = r->objective;
            best_bin = cand;
          }
        }
      };
      for (std::size_t a = 0; a < binaries_.size() && budget > 0; ++a) {
        const std::size_t j = binaries_[a];
        std::vector<double> cand = binv;
        cand[j] = 1.0 - cand[j];
        consider(cand);
        for (std::size_t b = a + 1;
             b < binaries_.size() && binaries_[b] - j <= 12 && budget > 0;
             ++b) {
          const std::size_t k = binaries_[b];
          if (binv[k] == binv[j]) continue;
          std::vector<double> swp = binv;
          swp[j] = 1.0 - swp[j];
          swp[k] = 1.0 - swp[k];
          consider(swp);
        }
      }
      if (best_bin.empty()) break;
      binv = std::move(best_bin);
      if (auto r = eval_pinned(binv))
        store_incumbent(r->objective, r->assignment);
    }
  }

  void note_pruned(double bound) {
    pruned_floor_ = std::min(pruned_floor_, bound);
  }

  double frontier_floor() const {
    double floor = pruned_floor_;
    // priority_queue hides its contents; top() is the least bound, which
    // is exactly the frontier's floor under the Worse ordering.
    if (!frontier_.empty()) floor = std::min(floor, frontier_.top().bound);
    return floor;
  }

  const Model& model_;
  BnbParams params_;
  std::vector<std::size_t> binaries_;
  std::vector<double> root_lo_, root_up_;
  std::vector<Node> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, Worse> frontier_;
  bool have_incumbent_ = false;
  double incumbent_z_ = 0.0;
  std::vector<double> incumbent_;
  double pruned_floor_ = kInf;
};

}  // namespace detail

inline MilpSolution branch_and_bound(const Model& model,
                                     const BnbParams& params = {}) {
  if (!(params.int_tol > 0) || !(params.feas_tol > 0) || !(params.gap_abs > 0))
    throw SolverError("branch_and_bound: tolerances must be positive");
  return detail::BnbSearch(model, params).run();
}

}  // namespace hems::milp
