#pragma once

// Two-phase primal revised simplex over general variable bounds.
//
// Layout: one structural column per model variable (binaries relaxed to
// [0,1] unless overridden), one logical column per row turning the row
// into an equality, and one artificial column per row for the phase-1
// crash. The basis inverse is kept as a dense column-major matrix so the
// three per-iteration kernels (BTRAN, FTRAN, eta update) all walk
// contiguous memory. Variables fixed by bounds are substituted into the
// right-hand side up front; rows left with no free terms are checked and
// dropped, which is what makes branch-and-bound node solves cheap once
// most binaries are pinned.
//
// Pricing is Dantzig's rule, switching to Bland's rule permanently after
// 3*(rows+cols) iterations without objective progress. The ratio test
// handles bound flips. The inverse is rebuilt from scratch at a fixed
// pivot cadence; a singular rebuild reports the offending pivot.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hems/milp.hpp"

namespace hems::milp {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimplexParams {
  double feas_tol = 1e-7;   // row/bound feasibility
  double dual_tol = 1e-7;   // reduced-cost eligibility
  double pivot_tol = 1e-8;  // smallest usable ratio-test denominator
  std::size_t refactor_interval = 250;
  std::size_t max_iterations = 0;  // 0 = scale with problem size
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> assignment;  // per VarId index; empty unless Optimal
  std::size_t iteration_count = 0;
};

namespace detail {

enum class ColStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeNB, Fixed };

class LpEngine {
 public:
  LpEngine(const Model& model, std::vector<double> lower,
           std::vector<double> upper, const SimplexParams& params)
      : model_(model),
        params_(params),
        n_(model.num_vars()),
        lo_(std::move(lower)),
        up_(std::move(upper)) {}

  LpSolution run() {
    LpSolution out;
    for (std::size_t j = 0; j < n_; ++j)
      if (lo_[j] > up_[j] + 1e-9) return out;  // contradictory box
    if (!condense_rows()) return out;
    build_columns();
    crash();

    if (artificial_load_ > 0.0) {
      const Verdict v = iterate(/*phase1=*/true);
      if (v == Verdict::IterationCap)
        throw SolverError("simplex: iteration cap hit in phase 1");
      if (v == Verdict::Unbounded)
        throw SolverError("simplex: unbounded phase-1 direction");
      if (phase1_load() > params_.feas_tol * (1.0 + rhs_norm_)) return out;
    }
    seal_artificials();

    const Verdict v = iterate(/*phase1=*/false);
    if (v == Verdict::IterationCap)
      throw SolverError("simplex: iteration cap hit in phase 2");
    if (v == Verdict::Unbounded) {
      out.status = LpStatus::Unbounded;
      out.iteration_count = iterations_;
      return out;
    }

    refresh_basic_values();
    out.status = LpStatus::Optimal;
    out.iteration_count = iterations_;
    out.assignment.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      double v_j = status_[j] == ColStatus::Basic ? xb_[pos_[j]] : val_[j];
      if (v_j < lo_[j] && v_j > lo_[j] - 1e-6) v_j = lo_[j];
      if (v_j > up_[j] && v_j < up_[j] + 1e-6) v_j = up_[j];
      out.assignment[j] = v_j;
      out.objective += model_.var(VarId{j}).objective_coeff * v_j;
    }
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  enum class Verdict { Done, Unbounded, IterationCap };

  // --- problem condensation -------------------------------------------

  bool fixed(std::size_t j) const { return up_[j] - lo_[j] <= 1e-12; }

  // Folds fixed variables into the right-hand side; drops rows that end
  // up with no free terms after verifying they hold as constants.
  bool condense_rows() {
    for (const auto& row : model_.constraints()) {
      double rhs = row.rhs;
      std::vector<std::pair<std::size_t, double>> terms;
      for (const auto& [id, coeff] : row.terms) {
        if (fixed(id.index))
          rhs -= coeff * lo_[id.index];
        else
          terms.emplace_back(id.index, coeff);
      }
      if (terms.empty()) {
        const double slack = params_.feas_tol * (1.0 + std::abs(rhs));
        const bool ok = (row.sense == Sense::LE && rhs >= -slack) ||
                        (row.sense == Sense::GE && rhs <= slack) ||
                        (row.sense == Sense::EQ && std::abs(rhs) <= slack);
        if (!ok) return false;
        continue;
      }
      row_terms_.push_back(std::move(terms));
      rhs_.push_back(rhs);
      sense_.push_back(row.sense);
    }
    m_ = rhs_.size();
    rhs_norm_ = 0.0;
    for (double b : rhs_) rhs_norm_ = std::max(rhs_norm_, std::abs(b));
    return true;
  }

  void build_columns() {
    cols_.assign(n_, {});
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& [j, coeff] : row_terms_[i])
        cols_[j].emplace_back(i, coeff);

    ncols_ = n_ + 2 * m_;
    status_.assign(ncols_, ColStatus::Fixed);
    val_.assign(ncols_, 0.0);
    cost2_.assign(ncols_, 0.0);
    pos_.assign(ncols_, kNone);
    col_lo_.assign(ncols_, 0.0);
    col_up_.assign(ncols_, 0.0);

    for (std::size_t j = 0; j < n_; ++j) {
      col_lo_[j] = lo_[j];
      col_up_[j] = up_[j];
      cost2_[j] = model_.var(VarId{j}).objective_coeff;
      if (fixed(j)) {
        status_[j] = ColStatus::Fixed;
        val_[j] = lo_[j];
      } else if (lo_[j] > -kInf) {
        status_[j] = ColStatus::AtLower;
        val_[j] = lo_[j];
      } else if (up_[j] < kInf) {
        status_[j] = ColStatus::AtUpper;
        val_[j] = up_[j];
      } else {
        status_[j] = ColStatus::FreeNB;
        val_[j] = 0.0;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = n_ + i;
      switch (sense_[i]) {
        case Sense::LE:
          col_lo_[j] = 0.0;
          col_up_[j] = kInf;
          status_[j] = ColStatus::AtLower;
          break;
        case Sense::GE:
          col_lo_[j] = -kInf;
          col_up_[j] = 0.0;
          status_[j] = ColStatus::AtUpper;
          break;
        case Sense::EQ:
          col_lo_[j] = col_up_[j] = 0.0;
          status_[j] = ColStatus::Fixed;
          break;
      }
      val_[j] = 0.0;
    }
    // Artificial bounds are assigned in crash(); unused ones stay Fixed.
  }

  // Slack crash: each row is covered by its logical column when the
  // initial residual fits the logical bounds, otherwise by a sign-matched
  // artificial carrying the violation.
  void crash() {
    basis_.assign(m_, kNone);
    xb_.assign(m_, 0.0);
    cb_.assign(m_, 0.0);
    binv_.assign(m_ * m_, 0.0);
    art_sign_.assign(m_, 1.0);
    artificial_load_ = 0.0;

    std::vector<double> resid = rhs_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (val_[j] == 0.0) continue;
      for (const auto& [i, coeff] : cols_[j]) resid[i] -= coeff * val_[j];
    }

    for (std::size_t i = 0; i < m_; ++i) {
      const double r = resid[i];
      const std::size_t logical = n_ + i;
      const std::size_t artificial = n_ + m_ + i;
      const bool logical_fits =
          (sense_[i] == Sense::LE && r >= 0.0) ||
          (sense_[i] == Sense::GE && r <= 0.0) ||
          (sense_[i] == Sense::EQ && std::abs(r) <= 1e-12);
      double diag;
      if (logical_fits) {
        basis_[i] = logical;
        xb_[i] = r;
        diag = 1.0;
      } else {
        art_sign_[i] = r >= 0.0 ? 1.0 : -1.0;
        col_lo_[artificial] = 0.0;
        col_up_[artificial] = kInf;
        basis_[i] = artificial;
        xb_[i] = std::abs(r);
        diag = art_sign_[i];
        artificial_load_ += xb_[i];
      }
      status_[basis_[i]] = ColStatus::Basic;
      pos_[basis_[i]] = i;
      binv_[i * m_ + i] = diag;
    }
  }

  // --- column access ----------------------------------------------------

  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }

  double dot_col_y(std::size_t j, const std::vector<double>& y) const {
    if (j < n_) {
      double s = 0.0;
      for (const auto& [i, coeff] : cols_[j]) s += y[i] * coeff;
      return s;
    }
    if (j < n_ + m_) return y[j - n_];
    return art_sign_[j - n_ - m_] * y[j - n_ - m_];
  }

  // w = Binv * A_j, accumulated column-by-column of Binv.
  void ftran(std::size_t j, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    auto add_scaled = [&](std::size_t i, double coeff) {
      const double* col = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) w[k] += coeff * col[k];
    };
    if (j < n_) {
      for (const auto& [i, coeff] : cols_[j]) add_scaled(i, coeff);
    } else if (j < n_ + m_) {
      add_scaled(j - n_, 1.0);
    } else {
      add_scaled(j - n_ - m_, art_sign_[j - n_ - m_]);
    }
  }

  double cost_of(std::size_t j, bool phase1) const {
    if (phase1) return is_artificial(j) ? 1.0 : 0.0;
    return cost2_[j];
  }

  double phase1_load() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (is_artificial(basis_[i])) s += std::max(0.0, xb_[i]);
    return s;
  }

  void seal_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = n_ + m_ + i;
      col_lo_[j] = col_up_[j] = 0.0;
      if (status_[j] != ColStatus::Basic) status_[j] = ColStatus::Fixed;
      else if (std::abs(xb_[pos_[j]]) <= params_.feas_tol)
        xb_[pos_[j]] = 0.0;
    }
  }

  // --- iteration --------------------------------------------------------

  double objective_now(bool phase1) const {
    double z = 0.0;
    for (std::size_t i = 0; i < m_; ++i) z += cb_[i] * xb_[i];
    if (!phase1)
      for (std::size_t j = 0; j < n_; ++j)
        if (status_[j] != ColStatus::Basic) z += cost2_[j] * val_[j];
    return z;
  }

  Verdict iterate(bool phase1) {
    for (std::size_t i = 0; i < m_; ++i) cb_[i] = cost_of(basis_[i], phase1);
    const std::size_t stall_limit = 3 * (m_ + ncols_);
    const std::size_t cap = params_.max_iterations
                                ? params_.max_iterations
                                : 20000 + 200 * (m_ + n_);
    bool bland = false;
    std::size_t stalled = 0;
    double best_obj = objective_now(phase1);

    std::vector<double> y(m_), w(m_);
    for (;;) {
      if (iterations_ >= cap) return Verdict::IterationCap;

      // BTRAN + pricing
      for (std::size_t i = 0; i < m_; ++i) {
        const double* col = &binv_[i * m_];
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += cb_[k] * col[k];
        y[i] = s;
      }
      std::size_t enter = kNone;
      double best_viol = params_.dual_tol;
      int enter_dir = 0;
      const std::size_t priced = n_ + m_;  // artificials never re-enter
      for (std::size_t j = 0; j < priced; ++j) {
        const ColStatus st = status_[j];
        if (st == ColStatus::Basic || st == ColStatus::Fixed) continue;
        const double d = cost_of(j, phase1) - dot_col_y(j, y);
        int dir = 0;
        double viol = 0.0;
        if (st == ColStatus::AtLower && d < -params_.dual_tol) {
          dir = +1;
          viol = -d;
        } else if (st == ColStatus::AtUpper && d > params_.dual_tol) {
          dir = -1;
          viol = d;
        } else if (st == ColStatus::FreeNB && std::abs(d) > params_.dual_tol) {
          dir = d < 0 ? +1 : -1;
          viol = std::abs(d);
        }
        if (!dir) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (viol > best_viol) {
          best_viol = viol;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter == kNone) return Verdict::Done;

      ftran(enter, w);
      const double sigma = static_cast<double>(enter_dir);

      // Ratio test: entering moves by theta >= 0 in direction sigma;
      // basic values move by -sigma * theta * w.
      double theta = col_up_[enter] - col_lo_[enter];  // own bound flip
      if (!(theta < kInf)) theta = kInf;
      std::size_t leave = kNone;
      double leave_at = 0.0;  // bound the leaving variable lands on
      for (std::size_t k = 0; k < m_; ++k) {
        const double delta = -sigma * w[k];
        if (std::abs(delta) <= params_.pivot_tol) continue;
        const std::size_t bj = basis_[k];
        double limit;
        double target;
        if (delta < 0.0) {
          if (col_lo_[bj] <= -kInf) continue;
          limit = (xb_[k] - col_lo_[bj]) / -delta;
          target = col_lo_[bj];
        } else {
          if (col_up_[bj] >= kInf) continue;
          limit = (col_up_[bj] - xb_[k]) / delta;
          target = col_up_[bj];
        }
        if (limit < 0.0) limit = 0.0;
        bool better;
        if (leave == kNone)
          better = limit < theta;
        else if (bland)
          better = limit < theta - 1e-12 ||
                   (limit <= theta + 1e-12 && basis_[k] < basis_[leave]);
        else
          better = limit < theta - 1e-12 ||
                   (limit <= theta + 1e-12 &&
                    std::abs(w[k]) > std::abs(w[leave]));
        if (better) {
          theta = limit;
          leave = k;
          leave_at = target;
        }
      }

      if (leave == kNone && !(theta < kInf)) {
        if (phase1) return Verdict::Unbounded;  // impossible in exact math
        return Verdict::Unbounded;
      }
      ++iterations_;

      if (leave == kNone) {
        // Bound flip: no basis change.
        for (std::size_t k = 0; k < m_; ++k) xb_[k] -= sigma * theta * w[k];
        val_[enter] = enter_dir > 0 ? col_up_[enter] : col_lo_[enter];
        status_[enter] =
            enter_dir > 0 ? ColStatus::AtUpper : ColStatus::AtLower;
      } else {
        const double entering_value =
            (status_[enter] == ColStatus::FreeNB ? 0.0 : val_[enter]) +
            sigma * theta;
        for (std::size_t k = 0; k < m_; ++k) xb_[k] -= sigma * theta * w[k];

        const std::size_t out_col = basis_[leave];
        status_[out_col] = (leave_at == col_up_[out_col] &&
                            col_up_[out_col] < kInf)
                               ? ColStatus::AtUpper
                               : ColStatus::AtLower;
        if (col_lo_[out_col] == col_up_[out_col])
          status_[out_col] = ColStatus::Fixed;
        val_[out_col] = leave_at;
        pos_[out_col] = kNone;

        basis_[leave] = enter;
        xb_[leave] = entering_value;
        cb_[leave] = cost_of(enter, phase1);
        status_[enter] = ColStatus::Basic;
        pos_[enter] = leave;

        update_binv(w, leave);
        if (++pivots_since_refactor_ >= params_.refactor_interval)
          refactor(phase1);
      }

      const double z = objective_now(phase1);
      if (z < best_obj - 1e-9 * (1.0 + std::abs(best_obj))) {
        best_obj = z;
        stalled = 0;
      } else if (!bland && ++stalled > stall_limit) {
        bland = true;
      }
    }
  }

  // Binv <- E * Binv with eta column derived from w at pivot row r.
  void update_binv(const std::vector<double>& w, std::size_t r) {
    const double piv = w[r];
    for (std::size_t c = 0; c < m_; ++c) {
      double* col = &binv_[c * m_];
      const double t = col[r] / piv;
      if (t == 0.0) continue;
      col[r] = t;
      for (std::size_t k = 0; k < m_; ++k)
        if (k != r) col[k] -= w[k] * t;
    }
  }

  // Rebuilds Binv by Gauss-Jordan with partial pivoting and recomputes
  // basic values from the nonbasic assignment.
  void refactor(bool phase1) {
    pivots_since_refactor_ = 0;
    std::vector<double> b(m_ * m_, 0.0);  // column-major basis matrix
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t j = basis_[k];
      double* col = &b[k * m_];
      if (j < n_) {
        for (const auto& [i, coeff] : cols_[j]) col[i] = coeff;
      } else if (j < n_ + m_) {
        col[j - n_] = 1.0;
      } else {
        col[j - n_ - m_] = art_sign_[j - n_ - m_];
      }
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) inv[k * m_ + k] = 1.0;
    std::vector<std::size_t> where(m_, kNone);  // pivot row per column

    auto at = [&](std::vector<double>& mat, std::size_t row,
                  std::size_t col) -> double& { return mat[col * m_ + row]; };
    std::vector<bool> used(m_, false);
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t prow = kNone;
      double best = 1e-10;
      for (std::size_t r2 = 0; r2 < m_; ++r2)
        if (!used[r2] && std::abs(at(b, r2, c)) > best) {
          best = std::abs(at(b, r2, c));
          prow = r2;
        }
      if (prow == kNone)
        throw SolverError("simplex: singular basis while refactoring, column " +
                          std::to_string(c) + " (variable index " +
                          std::to_string(basis_[c]) + ")");
      used[prow] = true;
      where[c] = prow;
      const double piv = at(b, prow, c);
      for (std::size_t cc = 0; cc < m_; ++cc) {
        at(b, prow, cc) /= piv;
        at(inv, prow, cc) /= piv;
      }
      for (std::size_t r2 = 0; r2 < m_; ++r2) {
        if (r2 == prow) continue;
        const double f = at(b, r2, c);
        if (f == 0.0) continue;
        for (std::size_t cc = 0; cc < m_; ++cc) {
          at(b, r2, cc) -= f * at(b, prow, cc);
          at(inv, r2, cc) -= f * at(inv, prow, cc);
        }
      }
    }
    // Rows of `inv` are permuted: pivot row where[c] holds inverse row c.
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t c = 0; c < m_; ++c)
      for (std::size_t cc = 0; cc < m_; ++cc)
        binv_[cc * m_ + c] = inv[cc * m_ + where[c]];

    refresh_basic_values();
    for (std::size_t i = 0; i < m_; ++i) cb_[i] = cost_of(basis_[i], phase1);
  }

  // xb = Binv * (rhs - N * val_N)
  void refresh_basic_values() {
    std::vector<double> resid = rhs_;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (status_[j] == ColStatus::Basic || val_[j] == 0.0) continue;
      if (j < n_) {
        for (const auto& [i, coeff] : cols_[j]) resid[i] -= coeff * val_[j];
      } else {
        resid[j - n_] -= val_[j];
      }
    }
    for (std::size_t k = 0; k < m_; ++k) xb_[k] = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (resid[i] == 0.0) continue;
      const double* col = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) xb_[k] += resid[i] * col[k];
    }
  }

  const Model& model_;
  SimplexParams params_;
  std::size_t n_ = 0;   // structural columns
  std::size_t m_ = 0;   // surviving rows
  std::size_t ncols_ = 0;
  std::vector<double> lo_, up_;

  std::vector<std::vector<std::pair<std::size_t, double>>> row_terms_;
  std::vector<double> rhs_;
  std::vector<Sense> sense_;
  double rhs_norm_ = 0.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> cols_;

  std::vector<ColStatus> status_;
  std::vector<double> val_, cost2_, col_lo_, col_up_;
  std::vector<std::size_t> pos_;

  std::vector<std::size_t> basis_;
  std::vector<double> xb_, cb_, binv_, art_sign_;
  double artificial_load_ = 0.0;
  std::size_t pivots_since_refactor_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace detail

/// Solves the LP relaxation of `model` with the stored variable bounds
/// (binary variables relaxed to their [0,1] box).
inline LpSolution solve_lp(const Model& model, const SimplexParams& params = {}) {
  std::vector<double> lo(model.num_vars()), up(model.num_vars());
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    lo[j] = model.var(VarId{j}).lower;
    up[j] = model.var(VarId{j}).upper;
  }
  return detail::LpEngine(model, std::move(lo), std::move(up), params).run();
}

/// Same, with per-variable bound overrides (used by branch-and-bound).
inline LpSolution solve_lp(const Model& model, std::vector<double> lower,
                           std::vector<double> upper,
                           const SimplexParams& params = {}) {
  if (lower.size() != model.num_vars() || upper.size() != model.num_vars())
    throw SolverError("solve_lp: bound override size mismatch");
  return detail::LpEngine(model, std::move(lower), std::move(upper), params)
      .run();
}

}  // namespace hems::milp
