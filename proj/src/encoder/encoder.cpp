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

#include "stlcomm/encoder/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stlcomm/error.hpp"

namespace stlcomm::encoder {

using milp::Relation;
using milp::VarKind;
using milp::VariableSpec;

namespace {

// Predicate indicators decide the motion; occupancy follows from it, so
// they are branched on first.
constexpr int kPredicatePriority = 1;

// Binary with the given bounds; creation alone always yields [0, 1].
VarId add_binary(MilpModel& model, std::string name, double lb, double ub, int priority = 0) {
  const VarId v = model.add_variable({std::move(name), VarKind::kBinary, 0.0, 1.0, priority});
  if (lb != 0.0 || ub != 1.0) model.set_bounds(v, lb, ub);
  return v;
}

std::string idx(std::initializer_list<long> parts) {
  std::string out;
  for (long p : parts) out += "_" + std::to_string(p);
  return out;
}

struct Box {
  std::array<double, 4> lo;
  std::array<double, 4> hi;
};

double speed_box(const Scenario& s) { return s.v_max / std::cos(M_PI / s.polygon_sides); }

// Interval hull of the states reachable from the initial state, clipped to
// the workspace and the speed box.
std::vector<Box> reachable_boxes(const Scenario& s, const State& x0) {
  const double vb = speed_box(s);
  const std::array<double, 4> lim_lo{s.grid.x_min, s.grid.y_min, -vb, -vb};
  const std::array<double, 4> lim_hi{s.grid.x_max(), s.grid.y_max(), vb, vb};
  std::vector<Box> out;
  Box cur;
  for (int k = 0; k < 4; ++k) cur.lo[k] = cur.hi[k] = x0[k];
  out.push_back(cur);
  for (int t = 0; t < s.horizon; ++t) {
    Box next;
    for (int k = 0; k < 4; ++k) {
      double lo = 0.0;
      double hi = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double a = s.A_d(k, j);
        lo += a >= 0 ? a * cur.lo[j] : a * cur.hi[j];
        hi += a >= 0 ? a * cur.hi[j] : a * cur.lo[j];
      }
      for (int m = 0; m < 2; ++m) {
        const double b = std::abs(s.B_d(k, m)) * s.u_max;
        lo -= b;
        hi += b;
      }
      const double clo = std::max(lo, lim_lo[k]);
      const double chi = std::min(hi, lim_hi[k]);
      // An empty hull leaves the model infeasible through the dynamics rows.
      next.lo[k] = clo <= chi ? clo : lim_lo[k];
      next.hi[k] = clo <= chi ? chi : lim_hi[k];
    }
    out.push_back(next);
    cur = next;
  }
  return out;
}

}  // namespace

std::vector<std::vector<VarId>> DecisionIndex::stacked_signal() const {
  std::vector<std::vector<VarId>> out(static_cast<std::size_t>(horizon + 1));
  for (int t = 0; t <= horizon; ++t) {
    for (const auto& agent : state) {
      for (VarId v : agent[static_cast<std::size_t>(t)]) out[static_cast<std::size_t>(t)].push_back(v);
    }
  }
  return out;
}

DecisionIndex create_decision_variables(MilpModel& model, const Scenario& s) {
  DecisionIndex index;
  index.horizon = s.horizon;
  const std::size_t P = s.agent_count();
  index.state.resize(P);
  index.input.resize(P);
  index.state_slack.resize(P);
  index.input_slack.resize(P);
  index.cells.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    const long a = static_cast<long>(i);
    const auto boxes = reachable_boxes(s, s.agents[i].initial_state);
    for (int t = 0; t <= s.horizon; ++t) {
      std::array<VarId, 4> x;
      for (int k = 0; k < 4; ++k) {
        const auto& b = boxes[static_cast<std::size_t>(t)];
        x[k] = model.add_variable({"x" + idx({a, t, k}), VarKind::kContinuous, b.lo[k], b.hi[k]});
      }
      index.state[i].push_back(x);
      index.cells[i].push_back(std::nullopt);
    }
    for (int t = 0; t < s.horizon; ++t) {
      std::array<VarId, 2> u;
      for (int k = 0; k < 2; ++k) {
        u[k] = model.add_variable({"u" + idx({a, t, k}), VarKind::kContinuous, -s.u_max, s.u_max});
      }
      index.input[i].push_back(u);
    }
  }
  return index;
}

void encode_dynamics(MilpModel& model, const Scenario& s, const DecisionIndex& index) {
  if (s.A_d.rows() != 4 || s.A_d.cols() != 4 || s.B_d.rows() != 4 || s.B_d.cols() != 2) {
    throw ValidationError("dynamics matrices must be 4x4 and 4x2");
  }
  for (std::size_t i = 0; i < index.state.size(); ++i) {
    const long a = static_cast<long>(i);
    const auto& x = index.state[i];
    const auto& u = index.input[i];
    for (int k = 0; k < 4; ++k) {
      LinearExpr e;
      e.add(x[0][k], 1.0);
      model.add_constraint("init" + idx({a, k}), e, Relation::kEqual, s.agents[i].initial_state[k]);
    }
    for (int t = 0; t < s.horizon; ++t) {
      const auto ts = static_cast<std::size_t>(t);
      for (int k = 0; k < 4; ++k) {
        LinearExpr e;
        e.add(x[ts + 1][k], 1.0);
        for (int j = 0; j < 4; ++j) {
          if (s.A_d(k, j) != 0.0) e.add(x[ts][j], -s.A_d(k, j));
        }
        for (int m = 0; m < 2; ++m) {
          if (s.B_d(k, m) != 0.0) e.add(u[ts][m], -s.B_d(k, m));
        }
        model.add_constraint("dyn" + idx({a, t, k}), e, Relation::kEqual, 0.0);
      }
    }
  }
}

void encode_input_velocity_bounds(MilpModel& model, const Scenario& s, const DecisionIndex& index) {
  for (std::size_t i = 0; i < index.input.size(); ++i) {
    for (const auto& u : index.input[i]) {
      for (VarId v : u) {
        const auto& var = model.variable(v);
        model.set_bounds(v, std::max(var.lb, -s.u_max), std::min(var.ub, s.u_max));
      }
    }
  }
  const int H = s.polygon_sides;
  for (std::size_t i = 0; i < index.state.size(); ++i) {
    for (int t = 0; t <= s.horizon; ++t) {
      const auto& x = index.state[i][static_cast<std::size_t>(t)];
      for (int h = 1; h <= H; ++h) {
        const double th = 2.0 * M_PI * h / H;
        double cs = std::sin(th);
        double cc = std::cos(th);
        if (std::abs(cs) < 1e-12) cs = 0.0;
        if (std::abs(cc) < 1e-12) cc = 0.0;
        LinearExpr e;
        if (cs != 0.0) e.add(x[2], cs);
        if (cc != 0.0) e.add(x[3], cc);
        model.add_constraint("vel" + idx({static_cast<long>(i), t, h}), e, Relation::kLessEqual,
                             s.v_max);
      }
    }
  }
}

LinearExpr encode_cost_motion(MilpModel& model, const Scenario& s, DecisionIndex& index) {
  LinearExpr j1;
  auto abs_slack = [&](VarId v, const std::string& name, double weight) {
    const auto& var = model.variable(v);
    const double cap = std::max(std::abs(var.lb), std::abs(var.ub));
    const VarId sl = model.add_variable({name, VarKind::kContinuous, 0.0, cap});
    LinearExpr pos;
    pos.add(v, 1.0).add(sl, -1.0);
    model.add_constraint(name + "_p", pos, Relation::kLessEqual, 0.0);
    LinearExpr neg;
    neg.add(v, -1.0).add(sl, -1.0);
    model.add_constraint(name + "_n", neg, Relation::kLessEqual, 0.0);
    if (weight != 0.0) j1.add(sl, weight);
    return sl;
  };
  const std::size_t P = index.state.size();
  index.state_slack.assign(P, {});
  index.input_slack.assign(P, {});
  for (std::size_t i = 0; i < P; ++i) {
    const long a = static_cast<long>(i);
    for (int t = 0; t <= s.horizon; ++t) {
      std::array<VarId, 4> sa;
      for (int k = 0; k < 4; ++k) {
        sa[k] = abs_slack(index.state[i][static_cast<std::size_t>(t)][k], "sa" + idx({a, t, k}),
                          s.q[static_cast<std::size_t>(k)]);
      }
      index.state_slack[i].push_back(sa);
    }
    for (int t = 0; t < s.horizon; ++t) {
      std::array<VarId, 2> sb;
      for (int k = 0; k < 2; ++k) {
        sb[k] = abs_slack(index.input[i][static_cast<std::size_t>(t)][k], "sb" + idx({a, t, k}),
                          s.r[static_cast<std::size_t>(k)]);
      }
      index.input_slack[i].push_back(sb);
    }
  }
  return j1;
}

StlEncoder::StlEncoder(MilpModel& model, std::vector<std::vector<VarId>> signal,
                       StlEncodingOptions options,
                       std::map<std::pair<const stl::FormulaNode*, int>, VarId>* cache)
    : model_(model), signal_(std::move(signal)), opt_(options), cache_(cache ? cache : &own_cache_) {
  if (!(opt_.big_m > 0.0) || !std::isfinite(opt_.big_m)) throw ValidationError("M", "must be positive");
  if (!(opt_.epsilon > 0.0) || !std::isfinite(opt_.epsilon)) {
    throw ValidationError("epsilon", "must be positive");
  }
}

int StlEncoder::node_id(const stl::FormulaNode* n) {
  auto [it, inserted] = node_ids_.emplace(n, static_cast<int>(node_ids_.size()));
  return it->second;
}

VarId StlEncoder::truth() {
  if (!truth_) truth_ = add_binary(model_, "z_true", 1.0, 1.0);
  return *truth_;
}

VarId StlEncoder::encode_predicate(const stl::AffinePredicate& p, int t, const std::string& name) {
  if (t < 0 || t >= steps()) {
    throw ValidationError("predicate at step " + std::to_string(t) + " lies beyond the horizon");
  }
  const auto& sig = signal_[static_cast<std::size_t>(t)];
  if (p.dimension() > sig.size()) {
    throw ValidationError("predicate dimension " + std::to_string(p.dimension()) +
                          " exceeds the signal dimension " + std::to_string(sig.size()));
  }
  LinearExpr mu(p.offset);
  double lo = p.offset;
  double hi = p.offset;
  for (std::size_t k = 0; k < p.dimension(); ++k) {
    const double c = p.coefficients[k];
    if (c == 0.0) continue;
    const auto& var = model_.variable(sig[k]);
    if (!std::isfinite(var.lb) || !std::isfinite(var.ub)) {
      throw ValidationError("predicate over unbounded variable '" + var.name + "'");
    }
    mu.add(sig[k], c);
    lo += c >= 0 ? c * var.lb : c * var.ub;
    hi += c >= 0 ? c * var.ub : c * var.lb;
  }
  const double M = opt_.big_m;
  const double eps = opt_.epsilon;
  const double s = p.strictness == stl::Strictness::kStrict ? 1.0 : 0.0;
  if (M < eps - lo || M < hi + eps * s) {
    throw ValidationError("M", "value " + milp::format_double(M) +
                                   " is too small for predicate range [" + milp::format_double(lo) +
                                   ", " + milp::format_double(hi) + "] in '" + name + "'");
  }
  // Each row uses the smallest constant the bounds allow; M only has to
  // dominate it. The integer solutions are the same, the relaxation tighter.
  const double m_on = std::max(eps - lo, 0.0);
  const double m_off = std::max(hi + eps * s, 0.0);
  const VarId z = add_binary(model_, name, 0.0, 1.0, kPredicatePriority);
  // mu >= eps - M (1 - z)
  LinearExpr on = mu;
  on.add(z, -m_on);
  model_.add_constraint(name + "_on", on, Relation::kGreaterEqual, eps - m_on);
  // mu <= -eps s + M z
  LinearExpr off = mu;
  off.add(z, -m_off);
  model_.add_constraint(name + "_off", off, Relation::kLessEqual, -eps * s);
  return z;
}

VarId StlEncoder::combine(bool conjunction, const std::vector<VarId>& parts, const std::string& name) {
  if (parts.size() == 1) return parts.front();
  const VarId z = add_binary(model_, name, 0.0, 1.0);
  LinearExpr sum;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    LinearExpr e;
    e.add(z, 1.0).add(parts[k], -1.0);
    // And: z <= z_k. Or: z >= z_k.
    model_.add_constraint(name + "_c" + std::to_string(k), e,
                          conjunction ? Relation::kLessEqual : Relation::kGreaterEqual, 0.0);
    sum.add(parts[k], 1.0);
  }
  LinearExpr e = sum;
  e.add(z, -1.0);
  const double K = static_cast<double>(parts.size());
  // And: z >= sum - (K - 1). Or: z <= sum.
  if (conjunction) {
    model_.add_constraint(name + "_s", e, Relation::kLessEqual, K - 1.0);
  } else {
    model_.add_constraint(name + "_s", e, Relation::kGreaterEqual, 0.0);
  }
  return z;
}

VarId StlEncoder::encode(const stl::Formula& f, int t) {
  if (t < 0 || t + stl::formula_horizon(f) >= steps()) {
    throw ValidationError("formula at step " + std::to_string(t) + " needs " +
                          std::to_string(stl::formula_horizon(f)) + " further steps, the horizon has " +
                          std::to_string(steps() - 1 - std::max(t, 0)));
  }
  const auto key = std::make_pair(f.node(), t);
  if (auto it = cache_->find(key); it != cache_->end()) return it->second;

  const int id = node_id(f.node());
  const std::string name = "z" + idx({id, t});
  VarId z;
  switch (f.kind()) {
    case stl::NodeKind::kTrue:
      z = truth();
      break;
    case stl::NodeKind::kPredicate:
    case stl::NodeKind::kNegPredicate: {
      const stl::AffinePredicate p = f.effective_predicate();
      auto pkey = std::make_tuple(p.coefficients, p.offset, p.strictness, t);
      if (auto it = predicates_.find(pkey); it != predicates_.end()) {
        z = it->second;
      } else {
        z = encode_predicate(p, t, name);
        predicates_.emplace(std::move(pkey), z);
      }
      break;
    }
    case stl::NodeKind::kAnd:
    case stl::NodeKind::kOr: {
      std::vector<VarId> parts;
      for (const auto& c : f.children()) parts.push_back(encode(c, t));
      z = combine(f.kind() == stl::NodeKind::kAnd, parts, name);
      break;
    }
    case stl::NodeKind::kAlways:
    case stl::NodeKind::kEventually: {
      std::vector<VarId> parts;
      const auto [a, b] = f.interval();
      for (int tp = t + a; tp <= t + b; ++tp) parts.push_back(encode(f.children()[0], tp));
      z = combine(f.kind() == stl::NodeKind::kAlways, parts, name);
      break;
    }
    case stl::NodeKind::kUntil: {
      const auto [a, b] = f.interval();
      const auto& lhs = f.children()[0];
      const auto& rhs = f.children()[1];
      std::vector<VarId> clauses;
      for (int tp = t + a; tp <= t + b; ++tp) {
        std::vector<VarId> parts{encode(rhs, tp)};
        for (int tq = t; tq <= tp; ++tq) parts.push_back(encode(lhs, tq));
        clauses.push_back(combine(true, parts, "zu" + idx({id, t, tp})));
      }
      z = combine(false, clauses, name);
      break;
    }
  }
  cache_->emplace(key, z);
  return z;
}

VarId StlEncoder::require(const stl::Formula& f) {
  const VarId z = encode(f, 0);
  LinearExpr e;
  e.add(z, 1.0);
  model_.add_constraint("req_" + std::to_string(node_id(f.node())) + "_" + std::to_string(aux_++), e,
                        Relation::kEqual, 1.0);
  return z;
}

namespace {

const CellVars& cell_vars(MilpModel& model, const Scenario& s, DecisionIndex& index, int agent, int t) {
  auto& slot = index.cells[static_cast<std::size_t>(agent)][static_cast<std::size_t>(t)];
  if (slot) return *slot;
  const auto& g = s.grid;
  const int N = g.N;
  const auto& x = index.state[static_cast<std::size_t>(agent)][static_cast<std::size_t>(t)];
  const long ag = agent;
  auto axis_range = [&](VarId pos, double origin) {
    const auto& v = model.variable(pos);
    const double lo = std::ceil((v.lb - origin) / g.d - 1e-9);
    const double hi = std::floor((v.ub - origin) / g.d + 1.0 + 1e-9);
    return std::pair<double, double>{std::clamp(lo, 1.0, double(N)), std::clamp(hi, 1.0, double(N))};
  };
  const auto [alo, ahi] = axis_range(x[0], g.x_min);
  const auto [blo, bhi] = axis_range(x[1], g.y_min);
  const bool tight = s.occupancy_tightening;
  CellVars c;
  c.a = model.add_variable({"a" + idx({ag, t}), VarKind::kInteger, alo, std::max(alo, ahi), tight ? 0 : 1});
  c.b = model.add_variable({"b" + idx({ag, t}), VarKind::kInteger, blo, std::max(blo, bhi), tight ? 0 : 1});
  const double rlo = (alo - 1) * N + blo;
  const double rhi = (std::max(alo, ahi) - 1) * N + std::max(blo, bhi);
  c.r = model.add_variable({"r" + idx({ag, t}), VarKind::kInteger, rlo, rhi});

  auto cell_rows = [&](VarId pos, VarId k, double origin, const std::string& tag) {
    // origin + (k - 1) d <= pos <= origin + k d
    LinearExpr e;
    e.add(pos, 1.0).add(k, -g.d);
    model.add_constraint(tag + "lo" + idx({ag, t}), e, Relation::kGreaterEqual, origin - g.d);
    model.add_constraint(tag + "hi" + idx({ag, t}), e, Relation::kLessEqual, origin);
  };
  cell_rows(x[0], c.a, g.x_min, "cx");
  cell_rows(x[1], c.b, g.y_min, "cy");
  LinearExpr e;
  e.add(c.r, 1.0).add(c.a, -double(N)).add(c.b, -1.0);
  model.add_constraint("cr" + idx({ag, t}), e, Relation::kEqual, -double(N));

  if (tight) {
    LinearExpr sum, sa, sb, xlo, xhi, ylo, yhi;
    for (int a = 1; a <= N; ++a) {
      for (int b = 1; b <= N; ++b) {
        const bool reachable = a >= alo && a <= ahi && b >= blo && b <= bhi;
        const VarId v = add_binary(model, "c" + idx({ag, t, g.index(a, b)}), 0.0, reachable ? 1.0 : 0.0);
        c.indicator.push_back(v);
        sum.add(v, 1.0);
        sa.add(v, a);
        sb.add(v, b);
        xlo.add(v, g.x_min + (a - 1) * g.d);
        xhi.add(v, g.x_min + a * g.d);
        ylo.add(v, g.y_min + (b - 1) * g.d);
        yhi.add(v, g.y_min + b * g.d);
      }
    }
    model.add_constraint("ci" + idx({ag, t}), sum, Relation::kEqual, 1.0);
    sa.add(c.a, -1.0);
    model.add_constraint("ca" + idx({ag, t}), sa, Relation::kEqual, 0.0);
    sb.add(c.b, -1.0);
    model.add_constraint("cb" + idx({ag, t}), sb, Relation::kEqual, 0.0);
    xlo.add(x[0], -1.0);
    model.add_constraint("cxl" + idx({ag, t}), xlo, Relation::kLessEqual, 0.0);
    xhi.add(x[0], -1.0);
    model.add_constraint("cxh" + idx({ag, t}), xhi, Relation::kGreaterEqual, 0.0);
    ylo.add(x[1], -1.0);
    model.add_constraint("cyl" + idx({ag, t}), ylo, Relation::kLessEqual, 0.0);
    yhi.add(x[1], -1.0);
    model.add_constraint("cyh" + idx({ag, t}), yhi, Relation::kGreaterEqual, 0.0);
  }
  slot = c;
  return *slot;
}

}  // namespace

void encode_occupancy(MilpModel& model, const Scenario& s, std::pair<int, int> pair, DecisionIndex& index) {
  const auto [p, q] = pair;
  const int P = static_cast<int>(index.state.size());
  if (p == q || p < 0 || q < 0 || p >= P || q >= P) {
    throw ValidationError("occupancy pair (" + std::to_string(p) + "," + std::to_string(q) + ") is invalid");
  }
  const int n = s.grid.cell_count();
  if (s.big_m < n - 1) {
    throw ValidationError("M", "must be at least n - 1 = " + std::to_string(n - 1) + " for the occupancy rows");
  }
  // |i - r| never exceeds n - 1, so that is the tightest valid big-M here.
  const double M = std::min(s.big_m, double(n - 1));
  const long pi = static_cast<long>(index.pairs.size());
  PairOccupancy occ;
  occ.sender = p;
  occ.receiver = q;
  occ.cells = n;
  for (int t = 0; t <= s.horizon; ++t) {
    const CellVars cp = cell_vars(model, s, index, p, t);
    const CellVars cq = cell_vars(model, s, index, q, t);
    // Partition k is reachable when its column and row are.
    auto reach = [&](const CellVars& c, int k) {
      const auto& a = model.variable(c.a);
      const auto& b = model.variable(c.b);
      const int ka = (k - 1) / s.grid.N + 1;
      const int kb = (k - 1) % s.grid.N + 1;
      return ka >= a.lb && ka <= a.ub && kb >= b.lb && kb <= b.ub;
    };
    std::vector<VarId> row;
    row.reserve(static_cast<std::size_t>(n) * n);
    LinearExpr sum;
    // Row i and column j sums of 1 - O equal the occupancy indicators.
    std::vector<LinearExpr> rows_w(static_cast<std::size_t>(n), LinearExpr(double(n)));
    std::vector<LinearExpr> cols_w(static_cast<std::size_t>(n), LinearExpr(double(n)));
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const std::string name = "O" + idx({pi, i, j, t});
        // Cells the agents cannot reach are never the occupied pair.
        const bool reachable = reach(cp, i) && reach(cq, j);
        const VarId o = add_binary(model, name, reachable ? 0.0 : 1.0, 1.0);
        row.push_back(o);
        sum.add(o, 1.0);
        rows_w[static_cast<std::size_t>(i - 1)].add(o, -1.0);
        cols_w[static_cast<std::size_t>(j - 1)].add(o, -1.0);
        // With the indicator rows the occupied pair is already pinned down;
        // the big-M rows below would only restate it.
        if (!reachable || s.occupancy_tightening) continue;
        auto add = [&](const char* tag, VarId r, double sign, double k) {
          // sign (k - r) <= M O, with M no larger than the bounds of r need.
          const auto& rv = model.variable(r);
          const double reach_m = std::max(sign > 0 ? k - rv.lb : rv.ub - k, 0.0);
          LinearExpr e;
          e.add(r, -sign).add(o, -std::min(M, reach_m));
          model.add_constraint(name + tag, e, Relation::kLessEqual, -sign * k);
        };
        add("_ip", cp.r, 1.0, i);
        add("_in", cp.r, -1.0, i);
        add("_jp", cq.r, 1.0, j);
        add("_jn", cq.r, -1.0, j);
      }
    }
    model.add_constraint("occ" + idx({pi, t}), sum, Relation::kEqual, double(n) * n - 1.0);
    if (s.occupancy_tightening) {
      for (int k = 1; k <= n; ++k) {
        auto& rw = rows_w[static_cast<std::size_t>(k - 1)];
        rw.add(cp.indicator[static_cast<std::size_t>(k - 1)], -1.0);
        model.add_constraint("occi" + idx({pi, k, t}), rw, Relation::kEqual, 0.0);
        auto& cw = cols_w[static_cast<std::size_t>(k - 1)];
        cw.add(cq.indicator[static_cast<std::size_t>(k - 1)], -1.0);
        model.add_constraint("occj" + idx({pi, k, t}), cw, Relation::kEqual, 0.0);
      }
    }
    occ.occupancy.push_back(std::move(row));
  }
  index.pairs.push_back(std::move(occ));
}

LinearExpr encode_cost_comm(const channel::GainMatrix& gain, const DecisionIndex& index) {
  LinearExpr j2;
  for (const auto& pair : index.pairs) {
    if (gain.size() != pair.cells) {
      throw ValidationError("gain matrix has " + std::to_string(gain.size()) + " partitions, occupancy uses " +
                            std::to_string(pair.cells));
    }
    for (const auto& row : pair.occupancy) {
      for (int i = 1; i <= pair.cells; ++i) {
        for (int j = 1; j <= pair.cells; ++j) {
          const double g = gain.at(i, j);
          if (g == 0.0) continue;
          j2.add_constant(g);
          j2.add(row[static_cast<std::size_t>((i - 1) * pair.cells + (j - 1))], -g);
        }
      }
    }
  }
  return j2;
}

ModelStats model_stats(const MilpModel& model) {
  ModelStats st;
  st.variables = model.num_variables();
  st.constraints = model.num_constraints();
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::kBinary) ++st.binaries;
    if (v.kind == VarKind::kInteger) ++st.integers;
  }
  return st;
}

Assembly assemble(const Scenario& s, const channel::GainMatrix& gain, const AssembleOptions& options) {
  s.validate();
  Assembly out{MilpModel("stlcomm"), {}, {}, {}, {}, {}};
  auto& model = out.model;
  out.index = create_decision_variables(model, s);
  encode_dynamics(model, s, out.index);
  encode_input_velocity_bounds(model, s, out.index);
  out.j1 = encode_cost_motion(model, s, out.index);

  StlEncoder stl_enc(model, out.index.stacked_signal(), {s.big_m, s.epsilon}, &out.index.satisfaction);
  for (std::size_t i = 0; i < s.agent_count(); ++i) {
    const FormulaGroups groups = i < options.groups.size() ? options.groups[i] : FormulaGroups{};
    out.formulas.push_back(s.agent_formula(i, groups));
    out.index.requirement.push_back(stl_enc.require(out.formulas.back()));
  }

  const bool comm = s.alpha < 1.0 && options.occupancy;
  if (comm) {
    for (const auto& pr : s.communication_pairs()) encode_occupancy(model, s, pr, out.index);
    out.j2 = encode_cost_comm(gain, out.index);
  }
  LinearExpr obj;
  obj.add(out.j1, s.alpha);
  if (comm) obj.add(out.j2, 1.0 - s.alpha);
  model.set_objective(obj, milp::Sense::kMinimize);
  out.stats = model_stats(model);
  return out;
}

}  // namespace stlcomm::encoder
