#pragma once

// Deliberately naive dense two-phase tableau simplex used as a test
// oracle. It shares no code with hems/simplex.hpp: bounds become explicit
// rows via variable shifts, the full tableau is carried densely, and
// Bland's rule is used on every pivot so termination never depends on
// tie-breaking luck. Slow on purpose; intended for instances with a few
// dozen rows at most.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hems/milp.hpp"

namespace oracle {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;  // per structural VarId index
};

namespace detail {

constexpr double kEps = 1e-9;

struct StdForm {
  // min c'y  s.t.  A y (sense) b,  y >= 0
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<hems::milp::Sense> sense;
  std::vector<double> c;
  // y -> original x mapping: x[j] = shift[j] + sign[j] * y[col[j]]
  // (+ optional second column for free variables, x = y_p - y_q).
  struct BackMap {
    double shift = 0.0;
    double sign = 1.0;
    std::size_t col = 0;
    bool split = false;
    std::size_t neg_col = 0;
  };
  std::vector<BackMap> back;
};

inline StdForm standardize(const hems::milp::Model& model) {
  using hems::milp::Sense;
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = model.num_vars();

  StdForm f;
  f.back.resize(n);
  std::size_t cols = 0;
  struct BoundRow {
    std::size_t col;
    double rhs;
  };
  std::vector<BoundRow> bound_rows;

  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = model.var(hems::milp::VarId{j});
    double lo = v.lower, hi = v.upper;
    if (v.kind == hems::milp::VarKind::Binary) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, 1.0);
    }
    auto& bm = f.back[j];
    if (lo > -inf) {
      bm.shift = lo;
      bm.sign = 1.0;
      bm.col = cols++;
      if (hi < inf) bound_rows.push_back({bm.col, hi - lo});
    } else if (hi < inf) {
      bm.shift = hi;
      bm.sign = -1.0;
      bm.col = cols++;
    } else {
      bm.split = true;
      bm.col = cols++;
      bm.neg_col = cols++;
    }
  }

  const std::size_t m = model.num_constraints() + bound_rows.size();
  f.a.assign(m, std::vector<double>(cols, 0.0));
  f.b.assign(m, 0.0);
  f.sense.assign(m, Sense::LE);
  f.c.assign(cols, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    const double cj = model.var(hems::milp::VarId{j}).objective_coeff;
    const auto& bm = f.back[j];
    f.c[bm.col] += cj * bm.sign;
    if (bm.split) f.c[bm.neg_col] -= cj;
  }

  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const auto& row = model.constraints()[i];
    double rhs = row.rhs;
    for (const auto& [id, coeff] : row.terms) {
      const auto& bm = f.back[id.index];
      rhs -= coeff * bm.shift;
      f.a[i][bm.col] += coeff * bm.sign;
      if (bm.split) f.a[i][bm.neg_col] -= coeff;
    }
    f.b[i] = rhs;
    f.sense[i] = row.sense;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const std::size_t i = model.num_constraints() + k;
    f.a[i][bound_rows[k].col] = 1.0;
    f.b[i] = bound_rows[k].rhs;
    f.sense[i] = Sense::LE;
  }
  return f;
}

// One Bland-rule pass over a tableau whose last row holds reduced costs
// (min problem: entering column has negative reduced cost). Returns false
// when an unbounded direction is found.
inline bool run_pivots(std::vector<std::vector<double>>& t,
                       std::vector<std::size_t>& basis,
                       std::size_t eligible_cols) {
  const std::size_t m = t.size() - 1;
  for (;;) {
    std::size_t enter = eligible_cols;
    for (std::size_t j = 0; j < eligible_cols; ++j)
      if (t[m][j] < -kEps) {
        enter = j;
        break;
      }
    if (enter == eligible_cols) return true;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= kEps) continue;
      const double ratio = t[i].back() / t[i][enter];
      if (ratio < best - kEps ||
          (ratio < best + kEps && (leave == m || basis[i] < basis[leave]))) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == m) return false;

    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < t[i].size(); ++j)
        t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace detail

/// Solves the LP relaxation of `model` (binaries relaxed to [0,1]).
inline LpResult solve(const hems::milp::Model& model) {
  using hems::milp::Sense;
  detail::StdForm f = detail::standardize(model);
  const std::size_t m = f.b.size();
  std::size_t n = f.c.size();

  // Flip rows to nonnegative rhs, then append slacks and artificials.
  for (std::size_t i = 0; i < m; ++i) {
    if (f.b[i] < 0.0) {
      for (double& v : f.a[i]) v = -v;
      f.b[i] = -f.b[i];
      if (f.sense[i] == Sense::LE)
        f.sense[i] = Sense::GE;
      else if (f.sense[i] == Sense::GE)
        f.sense[i] = Sense::LE;
    }
  }
  std::size_t slack_count = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (f.sense[i] != Sense::EQ) ++slack_count;
  const std::size_t total = n + slack_count + m;  // artificial per row

  std::vector<std::vector<double>> t(m + 1,
                                     std::vector<double>(total + 1, 0.0));
  std::vector<std::size_t> basis(m, 0);
  std::size_t slack_at = n;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = f.a[i][j];
    if (f.sense[i] == Sense::LE)
      t[i][slack_at++] = 1.0;
    else if (f.sense[i] == Sense::GE)
      t[i][slack_at++] = -1.0;
    t[i][n + slack_count + i] = 1.0;
    t[i][total] = f.b[i];
    basis[i] = n + slack_count + i;
  }
  // Phase-1 reduced costs: minimize the artificial sum, whose cost row
  // equals minus the sum of all constraint rows on non-artificial columns.
  for (std::size_t j = 0; j <= total; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t[i][j];
    t[m][j] = (j >= n + slack_count && j < total) ? 0.0 : -s;
  }
  if (!detail::run_pivots(t, basis, n + slack_count))
    throw std::logic_error("oracle: phase-1 unbounded");
  if (-t[m][total] > 1e-7) return {LpStatus::Infeasible, 0.0, {}};

  // Drive any zero-level artificial out of the basis so phase 2 cannot
  // re-grow it. A row with no usable pivot is redundant and inert.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n + slack_count) continue;
    std::size_t enter = n + slack_count;
    for (std::size_t j = 0; j < n + slack_count; ++j)
      if (std::abs(t[i][j]) > 1e-7) {
        enter = j;
        break;
      }
    if (enter == n + slack_count) continue;
    const double piv = t[i][enter];
    for (double& v : t[i]) v /= piv;
    for (std::size_t k = 0; k <= m; ++k) {
      if (k == i) continue;
      const double fac = t[k][enter];
      if (fac == 0.0) continue;
      for (std::size_t j = 0; j < t[k].size(); ++j) t[k][j] -= fac * t[i][j];
    }
    basis[i] = enter;
  }

  // Phase 2: recompute reduced costs for the real objective; artificial
  // columns are barred from entering by the eligible-column cutoff.
  for (std::size_t j = 0; j <= total; ++j) {
    double d = (j < n) ? f.c[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = basis[i] < n ? f.c[basis[i]] : 0.0;
      d -= cb * t[i][j];
    }
    t[m][j] = d;
  }
  // A basic artificial at a positive level would mean phase 1 lied; at
  // zero it is harmless and simply never leaves profitably.
  if (!detail::run_pivots(t, basis, n + slack_count))
    return {LpStatus::Unbounded, 0.0, {}};

  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) y[basis[i]] = t[i][total];

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(model.num_vars(), 0.0);
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& bm = f.back[j];
    double v = bm.shift + bm.sign * y[bm.col];
    if (bm.split) v -= y[bm.neg_col];
    res.x[j] = v;
    res.objective += model.var(hems::milp::VarId{j}).objective_coeff * v;
  }
  return res;
}

}  // namespace oracle
