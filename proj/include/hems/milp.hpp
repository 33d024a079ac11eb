#pragma once

// Mixed-integer linear model: a variable registry plus sparse linear
// constraints and a minimized linear objective. The formulation layer
// produces it, the solver layer consumes it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hems::milp {

class FormulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Opaque handle into one model's variable registry.
struct VarId {
  std::size_t index = 0;
  friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
  friend bool operator!=(VarId a, VarId b) { return a.index != b.index; }
  friend bool operator<(VarId a, VarId b) { return a.index < b.index; }
};

enum class VarKind { Continuous, Binary };

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Variable metadata. Names follow "<symbol>.<device>.<t>", e.g.
/// "P_ch.phev.17". Binary variables keep bounds within {0,1}; fixing one
/// is expressed by collapsing the bounds.
struct VarSpec {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
  double objective_coeff = 0.0;
};

enum class Sense { LE, GE, EQ };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    case Sense::EQ: return "=";
  }
  return "?";
}

/// Sparse row: sum of coefficient*variable compared against rhs. The tag
/// names the constraint family and interval ("eq14.house.t=7") and is a
/// stable public identifier reused as the MPS row name.
struct LinearConstraint {
  std::vector<std::pair<VarId, double>> terms;
  Sense sense = Sense::LE;
  double rhs = 0.0;
  std::string tag;
};

class Model {
 public:
  VarId add_continuous(std::string name, double lower, double upper,
                       double objective_coeff = 0.0) {
    if (!(lower <= upper))
      throw FormulationError("variable '" + name + "': lower > upper");
    VarSpec spec;
    spec.name = std::move(name);
    spec.kind = VarKind::Continuous;
    spec.lower = lower;
    spec.upper = upper;
    spec.objective_coeff = objective_coeff;
    vars_.push_back(std::move(spec));
    return VarId{vars_.size() - 1};
  }

  VarId add_binary(std::string name, double objective_coeff = 0.0) {
    VarSpec spec;
    spec.name = std::move(name);
    spec.kind = VarKind::Binary;
    spec.lower = 0.0;
    spec.upper = 1.0;
    spec.objective_coeff = objective_coeff;
    vars_.push_back(std::move(spec));
    return VarId{vars_.size() - 1};
  }

  /// Collapses the variable's bounds to a constant.
  void fix(VarId id, double value) {
    VarSpec& v = at(id);
    if (v.kind == VarKind::Binary && value != 0.0 && value != 1.0)
      throw FormulationError("cannot fix binary '" + v.name + "' to " +
                             std::to_string(value));
    v.lower = value;
    v.upper = value;
  }

  void set_bounds(VarId id, double lower, double upper) {
    if (!(lower <= upper))
      throw FormulationError("variable '" + at(id).name + "': lower > upper");
    at(id).lower = lower;
    at(id).upper = upper;
  }

  void set_objective_coeff(VarId id, double coeff) {
    at(id).objective_coeff = coeff;
  }

  void add_objective_coeff(VarId id, double coeff) {
    at(id).objective_coeff += coeff;
  }

  /// Terms must reference registered variables, carry finite coefficients,
  /// and name each variable at most once.
  void add_constraint(std::vector<std::pair<VarId, double>> terms,
                      Sense sense, double rhs, std::string tag) {
    std::vector<bool> seen(vars_.size(), false);
    for (const auto& [id, coeff] : terms) {
      if (id.index >= vars_.size())
        throw FormulationError("constraint '" + tag +
                               "': unregistered variable id");
      if (!std::isfinite(coeff))
        throw FormulationError("constraint '" + tag +
                               "': non-finite coefficient");
      if (seen[id.index])
        throw FormulationError("constraint '" + tag + "': duplicate term '" +
                               vars_[id.index].name + "'");
      seen[id.index] = true;
    }
    if (!std::isfinite(rhs))
      throw FormulationError("constraint '" + tag + "': non-finite rhs");
    constraints_.push_back(
        LinearConstraint{std::move(terms), sense, rhs, std::move(tag)});
  }

  const VarSpec& var(VarId id) const { return at(id); }
  const std::vector<VarSpec>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const {
    return constraints_;
  }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  /// Looks a variable up by its full name; linear in the registry size on
  /// first use, then served from a lazily built index.
  std::optional<VarId> find(const std::string& name) const {
    if (name_index_.size() != vars_.size()) {
      name_index_.clear();
      name_index_.reserve(vars_.size());
      for (std::size_t i = 0; i < vars_.size(); ++i)
        name_index_.emplace(vars_[i].name, i);
    }
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return VarId{it->second};
  }

  double objective_value(const std::vector<double>& assignment) const {
    double z = 0.0;
    for (std::size_t j = 0; j < vars_.size(); ++j)
      z += vars_[j].objective_coeff * assignment.at(j);
    return z;
  }

 private:
  VarSpec& at(VarId id) {
    if (id.index >= vars_.size())
      throw FormulationError("unregistered variable id");
    return vars_[id.index];
  }
  const VarSpec& at(VarId id) const {
    if (id.index >= vars_.size())
      throw FormulationError("unregistered variable id");
    return vars_[id.index];
  }

  std::vector<VarSpec> vars_;
  std::vector<LinearConstraint> constraints_;
  mutable std::unordered_map<std::string, std::size_t> name_index_;
};

/// One violated rule found by check_assignment.
struct Violation {
  std::string what;   // constraint tag or variable name
  double amount = 0;  // magnitude of the violation
};

/// Independent evaluator: walks every bound and constraint of the model
/// against an assignment and reports violations beyond `tol`. Binary
/// variables must additionally sit within `int_tol` of 0 or 1.
inline std::vector<Violation> check_assignment(const Model& model,
                                               const std::vector<double>& x,
                                               double tol = 1e-7,
                                               double int_tol = 1e-6) {
  std::vector<Violation> out;
  if (x.size() != model.num_vars()) {
    out.push_back({"assignment size mismatch",
                   static_cast<double>(x.size()) -
                       static_cast<double>(model.num_vars())});
    return out;
  }
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const VarSpec& v = model.variables()[j];
    if (x[j] < v.lower - tol)
      out.push_back({v.name + " below lower bound", v.lower - x[j]});
    if (x[j] > v.upper + tol)
      out.push_back({v.name + " above upper bound", x[j] - v.upper});
    if (v.kind == VarKind::Binary) {
      const double d = std::min(std::abs(x[j]), std::abs(x[j] - 1.0));
      if (d > int_tol)
        out.push_back({v.name + " not integral", d});
    }
  }
  for (const auto& con : model.constraints()) {
    double lhs = 0.0;
    for (const auto& [id, coeff] : con.terms) lhs += coeff * x[id.index];
    double viol = 0.0;
    switch (con.sense) {
      case Sense::LE: viol = lhs - con.rhs; break;
      case Sense::GE: viol = con.rhs - lhs; break;
      case Sense::EQ: viol = std::abs(lhs - con.rhs); break;
    }
    if (viol > tol) out.push_back({con.tag, viol});
  }
  return out;
}

}  // namespace hems::milp
