#pragma once

// Fixed-format MPS writer. Row names come from constraint tags and column
// names from variable names, both shortened to the classical 8-character
// field: a name that fits is kept verbatim, a clash is resolved by
// replacing the tail with "~<base36 counter>" — the scheme is a pure
// function of model order, so the document is byte-stable. Binary columns
// are wrapped in INTORG/INTEND markers and re-stated as BV (or FX when
// pinned) in BOUNDS. Every column carries an explicit COST entry so
// variables that touch no row still exist for the reader, and every
// finite bound is written out rather than left to reader defaults.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "hems/milp.hpp"

namespace hems::milp {

namespace detail {

inline std::string base36(std::size_t n) {
  static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  do {
    s.insert(s.begin(), digits[n % 36]);
    n /= 36;
  } while (n);
  return s;
}

inline std::string shorten(const std::string& name,
                           std::unordered_set<std::string>& used) {
  std::string candidate = name.substr(0, 8);
  for (std::size_t counter = 1; used.count(candidate); ++counter) {
    const std::string suffix = "~" + base36(counter);
    candidate = name.substr(0, 8 - suffix.size()) + suffix;
  }
  used.insert(candidate);
  return candidate;
}

inline std::string mps_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  if (std::string(buf).size() > 12) std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void mps_entry(std::string& out, const std::string& a,
                      const std::string& b, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %12s\n", a.c_str(),
                b.c_str(), mps_number(v).c_str());
  out += buf;
}

}  // namespace detail

inline std::string export_mps(const Model& model,
                              const std::string& name = "HEMS") {
  const double inf = std::numeric_limits<double>::infinity();
  std::unordered_set<std::string> used_rows, used_cols;
  std::vector<std::string> row_name(model.num_constraints());
  std::vector<std::string> col_name(model.num_vars());

  std::string out;
  out += "NAME          " + name + "\n";
  out += "ROWS\n";
  out += " N  COST\n";
  used_rows.insert("COST");
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const auto& row = model.constraints()[i];
    row_name[i] = detail::shorten(row.tag, used_rows);
    const char* kind = row.sense == Sense::LE   ? "L"
                       : row.sense == Sense::GE ? "G"
                                                : "E";
    out += " ";
    out += kind;
    out += "  " + row_name[i] + "\n";
  }

  // Column-wise view of the rows, in row order per column.
  std::vector<std::vector<std::pair<std::size_t, double>>> entries(
      model.num_vars());
  for (std::size_t i = 0; i < model.num_constraints(); ++i)
    for (const auto& [id, coeff] : model.constraints()[i].terms)
      entries[id.index].emplace_back(i, coeff);

  out += "COLUMNS\n";
  bool in_integer_block = false;
  auto set_block = [&](bool integer) {
    if (integer == in_integer_block) return;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %12s\n", "MARKER",
                  "'MARKER'", integer ? "'INTORG'" : "'INTEND'");
    out += buf;
    in_integer_block = integer;
  };
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(VarId{j});
    col_name[j] = detail::shorten(v.name, used_cols);
    set_block(v.kind == VarKind::Binary);
    detail::mps_entry(out, col_name[j], "COST", v.objective_coeff);
    for (const auto& [row, coeff] : entries[j])
      detail::mps_entry(out, col_name[j], row_name[row], coeff);
  }
  set_block(false);

  out += "RHS\n";
  for (std::size_t i = 0; i < model.num_constraints(); ++i)
    if (model.constraints()[i].rhs != 0.0)
      detail::mps_entry(out, "RHS", row_name[i], model.constraints()[i].rhs);

  out += "RANGES\n";  // present but empty: rows carry single-sided senses

  out += "BOUNDS\n";
  auto bound_line = [&](const char* kind, std::size_t j, double value,
                        bool with_value) {
    char buf[64];
    if (with_value)
      std::snprintf(buf, sizeof(buf), " %s %-8s  %-8s  %12s\n", kind, "BND",
                    col_name[j].c_str(), detail::mps_number(value).c_str());
    else
      std::snprintf(buf, sizeof(buf), " %s %-8s  %-8s\n", kind, "BND",
                    col_name[j].c_str());
    out += buf;
  };
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(VarId{j});
    if (v.lower == v.upper) {
      bound_line("FX", j, v.lower, true);
      continue;
    }
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) {
      bound_line("BV", j, 0.0, false);
      continue;
    }
    if (v.lower == -inf && v.upper == inf) {
      bound_line("FR", j, 0.0, false);
      continue;
    }
    if (v.lower == -inf)
      bound_line("MI", j, 0.0, false);
    else
      bound_line("LO", j, v.lower, true);
    if (v.upper != inf) bound_line("UP", j, v.upper, true);
  }
  out += "ENDATA\n";
  return out;
}

}  // namespace hems::milp
