// Copyright 2026 The stlcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlcomm/milp/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "stlcomm/error.hpp"

namespace stlcomm::milp {

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  for (const auto& t : other.terms_) terms_.push_back({t.var, t.coef * scale});
  constant_ += other.constant_ * scale;
  return *this;
}

LinearExpr LinearExpr::normalized() const {
  std::vector<Term> sorted = terms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Term& a, const Term& b) { return a.var.value < b.var.value; });
  LinearExpr out(constant_);
  for (const auto& t : sorted) {
    if (!out.terms_.empty() && out.terms_.back().var == t.var) {
      out.terms_.back().coef += t.coef;
    } else {
      out.terms_.push_back(t);
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

double LinearExpr::evaluate(const std::vector<double>& values) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.coef * values[static_cast<std::size_t>(t.var.value)];
  return v;
}

double Constraint::activity(const std::vector<double>& values) const {
  double v = 0.0;
  for (const auto& t : terms) v += t.coef * values[static_cast<std::size_t>(t.var.value)];
  return v;
}

namespace {

void check_name(const std::string& name, const char* what) {
  if (name.empty()) throw ValidationError(std::string(what) + " name is empty");
  if (std::any_of(name.begin(), name.end(),
                  [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; })) {
    throw ValidationError(std::string(what) + " name '" + name + "' contains whitespace");
  }
}

}  // namespace

void MilpModel::check_var(VarId v) const {
  if (v.value < 0 || static_cast<std::size_t>(v.value) >= vars_.size()) {
    throw ValidationError("reference to unknown variable id " + std::to_string(v.value));
  }
}

VarId MilpModel::add_variable(VariableSpec spec) {
  check_name(spec.name, "variable");
  if (var_names_.count(spec.name)) {
    throw ValidationError("duplicate variable name '" + spec.name + "'");
  }
  if (spec.kind == VarKind::kBinary) {
    spec.lb = 0.0;
    spec.ub = 1.0;
  }
  if (std::isnan(spec.lb) || std::isnan(spec.ub) || spec.lb > spec.ub) {
    throw ValidationError("variable '" + spec.name + "' has inverted bounds");
  }
  const VarId id{static_cast<int>(vars_.size())};
  var_names_.emplace(spec.name, id.value);
  vars_.push_back({std::move(spec.name), spec.kind, spec.lb, spec.ub, spec.branch_priority});
  return id;
}

RowId MilpModel::add_constraint(std::string name, const LinearExpr& expr, Relation rel,
                                double rhs) {
  check_name(name, "constraint");
  if (row_names_.count(name)) throw ValidationError("duplicate constraint name '" + name + "'");
  for (const auto& t : expr.terms()) check_var(t.var);
  LinearExpr norm = expr.normalized();
  for (const auto& t : norm.terms()) {
    if (!std::isfinite(t.coef)) throw ValidationError("constraint '" + name + "' has a non-finite coefficient");
  }
  const double adjusted = rhs - norm.constant();
  if (!std::isfinite(adjusted)) throw ValidationError("constraint '" + name + "' has a non-finite right-hand side");
  const RowId id{static_cast<int>(rows_.size())};
  row_names_.emplace(name, id.value);
  rows_.push_back({std::move(name), norm.terms(), rel, adjusted});
  return id;
}

void MilpModel::set_objective(const LinearExpr& expr, Sense sense) {
  for (const auto& t : expr.terms()) check_var(t.var);
  objective_ = {expr.normalized(), sense};
}

void MilpModel::set_bounds(VarId v, double lb, double ub) {
  check_var(v);
  auto& var = vars_[static_cast<std::size_t>(v.value)];
  if (std::isnan(lb) || std::isnan(ub) || lb > ub) {
    throw ValidationError("variable '" + var.name + "' has inverted bounds");
  }
  if (var.kind == VarKind::kBinary && (lb < 0.0 || ub > 1.0)) {
    throw ValidationError("binary variable '" + var.name + "' bounds outside [0,1]");
  }
  var.lb = lb;
  var.ub = ub;
}

std::size_t MilpModel::num_integer_variables() const {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.is_integer(); }));
}

std::optional<VarId> MilpModel::find_variable(const std::string& name) const {
  auto it = var_names_.find(name);
  if (it == var_names_.end()) return std::nullopt;
  return VarId{it->second};
}

FeasibilityReport check_solution(const MilpModel& model, const Assignment& a, double tol) {
  if (a.values.size() != model.num_variables()) {
    throw ValidationError("assignment covers " + std::to_string(a.values.size()) + " of " +
                          std::to_string(model.num_variables()) + " variables");
  }
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    if (!std::isfinite(a.values[j])) {
      throw ValidationError("assignment has no finite value for '" + model.variables()[j].name + "'");
    }
  }
  FeasibilityReport rep;
  auto note = [&](Violation::Kind kind, int index, const std::string& name, double amount) {
    if (amount > tol) {
      rep.violations.push_back({kind, index, name, amount});
    }
    rep.max_violation = std::max(rep.max_violation, amount);
  };
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const double v = a.values[j];
    const int id = static_cast<int>(j);
    note(Violation::Kind::kBound, id, vars[j].name, std::max(vars[j].lb - v, v - vars[j].ub));
    if (vars[j].is_integer()) {
      note(Violation::Kind::kIntegrality, id, vars[j].name, std::abs(v - std::round(v)));
    }
  }
  const auto& rows = model.constraints();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double act = rows[i].activity(a.values);
    double viol = 0.0;
    switch (rows[i].relation) {
      case Relation::kLessEqual:
        viol = act - rows[i].rhs;
        break;
      case Relation::kGreaterEqual:
        viol = rows[i].rhs - act;
        break;
      case Relation::kEqual:
        viol = std::abs(act - rows[i].rhs);
        break;
    }
    note(Violation::Kind::kConstraint, static_cast<int>(i), rows[i].name, viol);
  }
  rep.objective = model.objective_value(a.values);
  return rep;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_mps(const MilpModel& model, std::ostream& out) {
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  const bool negate = model.objective().sense == Sense::kMaximize;

  out << "NAME " << model.name() << (negate ? "_maximize_negated" : "") << "\n";
  if (model.objective().expr.constant() != 0.0) {
    out << "* objective constant " << format_double(model.objective().expr.constant()) << "\n";
  }
  out << "ROWS\n N obj\n";
  for (const auto& r : rows) {
    const char* tag = r.relation == Relation::kLessEqual  ? "L"
                      : r.relation == Relation::kEqual    ? "E"
                                                          : "G";
    out << " " << tag << " " << r.name << "\n";
  }

  // Column-major view, rows in id order.
  std::vector<std::vector<std::pair<int, double>>> cols(vars.size());
  for (const auto& t : model.objective().expr.terms()) {
    cols[static_cast<std::size_t>(t.var.value)].push_back({-1, negate ? -t.coef : t.coef});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) {
      cols[static_cast<std::size_t>(t.var.value)].push_back({static_cast<int>(i), t.coef});
    }
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].is_integer() != in_int) {
      out << " MARKER" << marker++ << " 'MARKER' " << (in_int ? "'INTEND'" : "'INTORG'") << "\n";
      in_int = !in_int;
    }
    if (cols[j].empty()) {
      out << " " << vars[j].name << " obj 0\n";
      continue;
    }
    for (const auto& [row, coef] : cols[j]) {
      out << " " << vars[j].name << " " << (row < 0 ? std::string("obj") : rows[static_cast<std::size_t>(row)].name)
          << " " << format_double(coef) << "\n";
    }
  }
  if (in_int) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (const auto& r : rows) {
    if (r.rhs != 0.0) out << " RHS " << r.name << " " << format_double(r.rhs) << "\n";
  }

  // Bound lines keep the column name at position 15 and its value at 25 or
  // later, so readers that fall back to fixed fields here still parse them.
  auto bound = [&](const char* tag, const std::string& name, const std::string& value) {
    std::string line = std::string(" ") + tag + " BND       " + name;
    if (!value.empty()) {
      if (name.size() < 8) line.append(8 - name.size(), ' ');
      line += " " + value;
    }
    out << line << "\n";
  };
  out << "BOUNDS\n";
  for (const auto& v : vars) {
    const bool lb_inf = v.lb == -kInfinity;
    const bool ub_inf = v.ub == kInfinity;
    if (lb_inf && ub_inf) {
      bound("FR", v.name, {});
      continue;
    }
    if (!lb_inf && !ub_inf && v.lb == v.ub) {
      bound("FX", v.name, format_double(v.lb));
      continue;
    }
    if (lb_inf) {
      bound("MI", v.name, {});
    } else if (v.lb != 0.0 || v.is_integer()) {
      bound("LO", v.name, format_double(v.lb));
    }
    if (!ub_inf) {
      bound("UP", v.name, format_double(v.ub));
    } else if (v.is_integer()) {
      bound("PL", v.name, {});
    }
  }
  out << "ENDATA\n";
  if (!out) throw IoError("failed writing MPS output");
}

}  // namespace stlcomm::milp
