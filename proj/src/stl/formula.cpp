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

#include "stlcomm/stl/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "stlcomm/error.hpp"

namespace stlcomm::stl {

namespace {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void check_interval(Interval iv) {
  if (iv.lo < 0) throw ValidationError("interval lower bound is negative");
  if (iv.lo > iv.hi) {
    throw ValidationError("empty interval [" + std::to_string(iv.lo) + "," +
                          std::to_string(iv.hi) + "]");
  }
}

}  // namespace

AffinePredicate::AffinePredicate(std::vector<double> coefficients_in,
                                 double offset_in, Strictness strictness_in)
    : coefficients(std::move(coefficients_in)),
      offset(offset_in),
      strictness(strictness_in) {
  if (std::none_of(coefficients.begin(), coefficients.end(),
                   [](double c) { return c != 0.0; })) {
    throw ValidationError("predicate has no nonzero coefficient");
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ValidationError("non-finite predicate coefficient");
  }
  if (!std::isfinite(offset)) throw ValidationError("non-finite predicate offset");
}

double AffinePredicate::evaluate(std::span<const double> state) const {
  if (state.size() < coefficients.size()) {
    throw ValidationError("state has dimension " + std::to_string(state.size()) +
                          ", predicate needs " +
                          std::to_string(coefficients.size()));
  }
  double mu = offset;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    mu += coefficients[i] * state[i];
  }
  return mu;
}

bool AffinePredicate::holds(std::span<const double> state) const {
  const double mu = evaluate(state);
  return strictness == Strictness::kStrict ? mu > 0.0 : mu >= 0.0;
}

// not(mu > 0) is -mu >= 0; not(mu >= 0) is -mu > 0.
AffinePredicate AffinePredicate::negated() const {
  AffinePredicate out;
  out.coefficients.resize(coefficients.size());
  std::transform(coefficients.begin(), coefficients.end(),
                 out.coefficients.begin(), [](double c) { return -c; });
  out.offset = -offset;
  out.strictness = strictness == Strictness::kStrict ? Strictness::kNonStrict
                                                     : Strictness::kStrict;
  return out;
}

Formula Formula::truth() {
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kTrue;
  return Formula(std::move(n));
}

Formula Formula::predicate(AffinePredicate p) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kPredicate;
  n->predicate = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::negated(AffinePredicate p) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kNegPredicate;
  n->predicate = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw ValidationError("conjunction needs at least 2 operands");
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kAnd;
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw ValidationError("disjunction needs at least 2 operands");
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kOr;
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::always(Interval interval, Formula child) {
  check_interval(interval);
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kAlways;
  n->interval = interval;
  n->children.push_back(std::move(child));
  return Formula(std::move(n));
}

Formula Formula::eventually(Interval interval, Formula child) {
  check_interval(interval);
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kEventually;
  n->interval = interval;
  n->children.push_back(std::move(child));
  return Formula(std::move(n));
}

Formula Formula::until(Interval interval, Formula lhs, Formula rhs) {
  check_interval(interval);
  auto n = std::make_shared<FormulaNode>();
  n->kind = NodeKind::kUntil;
  n->interval = interval;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Formula(std::move(n));
}

Formula Formula::all_of(std::vector<Formula> children) {
  if (children.empty()) return truth();
  if (children.size() == 1) return std::move(children.front());
  return conjunction(std::move(children));
}

Formula Formula::any_of(std::vector<Formula> children) {
  if (children.empty()) throw ValidationError("disjunction of nothing");
  if (children.size() == 1) return std::move(children.front());
  return disjunction(std::move(children));
}

AffinePredicate Formula::effective_predicate() const {
  switch (kind()) {
    case NodeKind::kPredicate:
      return atom();
    case NodeKind::kNegPredicate:
      return atom().negated();
    default:
      throw ValidationError("not an atomic formula");
  }
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case NodeKind::kTrue:
      return true;
    case NodeKind::kPredicate:
    case NodeKind::kNegPredicate:
      return atom() == other.atom();
    default:
      return interval() == other.interval() && children() == other.children();
  }
}

int formula_horizon(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::kTrue:
    case NodeKind::kPredicate:
    case NodeKind::kNegPredicate:
      return 0;
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      int h = 0;
      for (const auto& c : f.children()) h = std::max(h, formula_horizon(c));
      return h;
    }
    case NodeKind::kAlways:
    case NodeKind::kEventually:
      return f.interval().hi + formula_horizon(f.children()[0]);
    case NodeKind::kUntil:
      return f.interval().hi + std::max(formula_horizon(f.children()[0]),
                                        formula_horizon(f.children()[1]));
  }
  return 0;
}

std::size_t formula_dimension(const Formula& f) {
  if (f.kind() == NodeKind::kPredicate || f.kind() == NodeKind::kNegPredicate) {
    return f.atom().dimension();
  }
  std::size_t d = 0;
  for (const auto& c : f.children()) d = std::max(d, formula_dimension(c));
  return d;
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += node_count(c);
  return n;
}

std::string to_string(const AffinePredicate& p) {
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
    const double c = p.coefficients[i];
    if (c == 0.0) continue;
    if (!first) out += " + ";
    out += format_number(c) + "*x" + std::to_string(i);
    first = false;
  }
  out += p.strictness == Strictness::kStrict ? " > " : " >= ";
  out += format_number(-p.offset);
  return out;
}

namespace {

std::string interval_text(const Interval& iv) {
  return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

std::string join(const std::vector<Formula>& cs, const char* op) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) out += op;
    out += "(" + to_string(cs[i]) + ")";
  }
  return out;
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::kTrue:
      return "true";
    case NodeKind::kPredicate:
      return to_string(f.atom());
    case NodeKind::kNegPredicate:
      return "!(" + to_string(f.atom()) + ")";
    case NodeKind::kAnd:
      return join(f.children(), " & ");
    case NodeKind::kOr:
      return join(f.children(), " | ");
    case NodeKind::kAlways:
      return "G" + interval_text(f.interval()) + "(" + to_string(f.children()[0]) + ")";
    case NodeKind::kEventually:
      return "F" + interval_text(f.interval()) + "(" + to_string(f.children()[0]) + ")";
    case NodeKind::kUntil:
      return "(" + to_string(f.children()[0]) + ") U" + interval_text(f.interval()) +
             " (" + to_string(f.children()[1]) + ")";
  }
  return {};
}

}  // namespace stlcomm::stl
