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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "basis_factor.hpp"
#include "stlcomm/error.hpp"
#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kMinWeight = 1e-10;
constexpr double kDropTol = 1e-14;

struct Candidate {
  int col;
  double ratio;
  double beta;  // absolute value of the signed pivot-row entry
};

}  // namespace

class DualSimplex::Impl {
 public:
  Impl(const LpProblem& lp, const LpOptions& options)
      : lp_(lp),
        opt_(options),
        n_(lp.num_cols),
        m_(lp.num_rows),
        total_(lp.num_cols + lp.num_rows),
        struct_lb_(lp.col_lb),
        struct_ub_(lp.col_ub),
        lb_(static_cast<std::size_t>(total_)),
        ub_(static_cast<std::size_t>(total_)),
        art_lb_(static_cast<std::size_t>(n_)),
        art_ub_(static_cast<std::size_t>(n_)),
        cost_(static_cast<std::size_t>(total_), 0.0),
        head_(static_cast<std::size_t>(m_)),
        pos_of_(static_cast<std::size_t>(total_), -1),
        status_(static_cast<std::size_t>(total_), VarStatus::kAtLower),
        x_(static_cast<std::size_t>(total_), 0.0),
        d_(static_cast<std::size_t>(total_), 0.0),
        y_(static_cast<std::size_t>(m_), 0.0),
        weight_(static_cast<std::size_t>(m_), 1.0),
        alpha_(static_cast<std::size_t>(total_), 0.0),
        factor_(lp) {
    std::copy(lp.cost.begin(), lp.cost.end(), cost_.begin());
  }

  void set_bounds(const std::vector<double>& lb, const std::vector<double>& ub) {
    if (static_cast<int>(lb.size()) != n_ || static_cast<int>(ub.size()) != n_) {
      throw ValidationError("bound vectors do not match the column count");
    }
    struct_lb_ = lb;
    struct_ub_ = ub;
  }

  void reset_basis() { have_basis_ = false; }

  LpStatus solve();

  std::vector<double> primal() const { return {x_.begin(), x_.begin() + n_}; }
  std::vector<double> duals() const { return y_; }
  std::vector<double> reduced_costs() const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) out[j] = status_[j] == VarStatus::kBasic ? 0.0 : d_[j];
    return out;
  }
  double objective() const {
    double v = lp_.objective_offset;
    for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
    return v;
  }
  std::int64_t iterations() const { return iterations_; }
  std::int64_t total_iterations() const { return total_iterations_; }
  double max_primal_infeasibility() const;
  double max_dual_infeasibility() const;

 private:
  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) f(lp_.col_row[e], lp_.col_val[e]);
    } else {
      f(j - n_, -1.0);
    }
  }

  bool prepare_bounds();
  void slack_basis();
  void place_nonbasic();
  bool refactor();
  void compute_primal();
  void compute_duals();
  int flip_dual_infeasible();
  bool refresh();
  int choose_leaving() const;
  double primal_tol(double bound) const { return opt_.primal_tol * (1.0 + std::abs(bound)); }
  bool timed_out() const {
    return std::chrono::duration<double>(Clock::now() - start_).count() > opt_.time_limit;
  }
  bool at_artificial(int j) const {
    return (status_[j] == VarStatus::kAtLower && art_lb_[j]) ||
           (status_[j] == VarStatus::kAtUpper && art_ub_[j]);
  }

  const LpProblem& lp_;
  LpOptions opt_;
  int n_, m_, total_;
  std::vector<double> struct_lb_, struct_ub_;
  std::vector<double> lb_, ub_;
  std::vector<char> art_lb_, art_ub_;
  std::vector<double> cost_;
  std::vector<int> head_, pos_of_;
  std::vector<VarStatus> status_;
  std::vector<double> x_, d_, y_, weight_;
  std::vector<double> alpha_;
  std::vector<int> touched_;
  BasisFactor factor_;
  bool have_basis_ = false;
  bool bland_ = false;
  std::int64_t iterations_ = 0;
  std::int64_t total_iterations_ = 0;
  Clock::time_point start_;
};

// Every variable gets a finite box. Structural infinities become the
// artificial bound; row activities are boxed by what the column bounds
// imply, which never cuts off a point inside the column box.
bool DualSimplex::Impl::prepare_bounds() {
  const double big = opt_.artificial_bound;
  for (int j = 0; j < n_; ++j) {
    const double l = struct_lb_[j];
    const double u = struct_ub_[j];
    if (l > u) return false;
    art_lb_[j] = !std::isfinite(l);
    art_ub_[j] = !std::isfinite(u);
    lb_[j] = art_lb_[j] ? (std::isfinite(u) ? std::min(-big, u - big) : -big) : l;
    ub_[j] = art_ub_[j] ? (std::isfinite(l) ? std::max(big, l + big) : big) : u;
  }
  for (int i = 0; i < m_; ++i) {
    double lo = 0.0;
    double hi = 0.0;
    for (int e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
      const int j = lp_.row_col[e];
      const double a = lp_.row_val[e];
      lo += std::min(a * lb_[j], a * ub_[j]);
      hi += std::max(a * lb_[j], a * ub_[j]);
    }
    const double rl = std::max(lp_.row_lb[i], lo);
    const double ru = std::min(lp_.row_ub[i], hi);
    const double tol = primal_tol(std::max(std::abs(rl), std::abs(ru)));
    if (rl > ru + tol) return false;
    lb_[n_ + i] = std::min(rl, ru);
    ub_[n_ + i] = ru;
  }
  return true;
}

void DualSimplex::Impl::slack_basis() {
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    pos_of_[n_ + i] = i;
    status_[n_ + i] = VarStatus::kBasic;
    weight_[i] = 1.0;
  }
  for (int j = 0; j < n_; ++j) {
    pos_of_[j] = -1;
    if (cost_[j] > 0.0) {
      status_[j] = VarStatus::kAtLower;
    } else if (cost_[j] < 0.0) {
      status_[j] = VarStatus::kAtUpper;
    } else {
      status_[j] = art_lb_[j] && !art_ub_[j] ? VarStatus::kAtUpper : VarStatus::kAtLower;
    }
  }
  have_basis_ = true;
  bland_ = false;
}

void DualSimplex::Impl::place_nonbasic() {
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic) continue;
    if (lb_[j] == ub_[j]) {
      status_[j] = VarStatus::kFixed;
    } else if (status_[j] == VarStatus::kFixed) {
      status_[j] = VarStatus::kAtLower;  // side settled by the dual sign later
    }
    x_[j] = status_[j] == VarStatus::kAtUpper ? ub_[j] : lb_[j];
  }
}

bool DualSimplex::Impl::refactor() {
  if (factor_.factorize(head_)) return true;
  slack_basis();
  place_nonbasic();
  return factor_.factorize(head_);
}

void DualSimplex::Impl::compute_primal() {
  std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    const double v = x_[j];
    for_column(j, [&](int i, double a) { rhs[i] -= a * v; });
  }
  factor_.ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

void DualSimplex::Impl::compute_duals() {
  std::vector<double> cb(static_cast<std::size_t>(m_));
  for (int p = 0; p < m_; ++p) cb[p] = cost_[head_[p]];
  factor_.btran(cb);
  y_ = cb;
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::kBasic) {
      d_[j] = 0.0;
      continue;
    }
    double s = cost_[j];
    for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) s -= lp_.col_val[e] * y_[lp_.col_row[e]];
    d_[j] = s;
  }
  for (int i = 0; i < m_; ++i) d_[n_ + i] = status_[n_ + i] == VarStatus::kBasic ? 0.0 : y_[i];
}

// Boxed variables with the wrong reduced-cost sign move to the other bound.
int DualSimplex::Impl::flip_dual_infeasible() {
  int flips = 0;
  for (int j = 0; j < total_; ++j) {
    if (status_[j] == VarStatus::kAtLower && d_[j] < -opt_.dual_tol) {
      status_[j] = VarStatus::kAtUpper;
      x_[j] = ub_[j];
      ++flips;
    } else if (status_[j] == VarStatus::kAtUpper && d_[j] > opt_.dual_tol) {
      status_[j] = VarStatus::kAtLower;
      x_[j] = lb_[j];
      ++flips;
    }
  }
  return flips;
}

bool DualSimplex::Impl::refresh() {
  if (!refactor()) return false;
  compute_duals();
  flip_dual_infeasible();
  compute_primal();
  return true;
}

int DualSimplex::Impl::choose_leaving() const {
  int best = -1;
  double best_score = 0.0;
  int best_col = total_;
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    double infeas = 0.0;
    if (x_[j] < lb_[j] - primal_tol(lb_[j])) {
      infeas = lb_[j] - x_[j];
    } else if (x_[j] > ub_[j] + primal_tol(ub_[j])) {
      infeas = x_[j] - ub_[j];
    } else {
      continue;
    }
    if (bland_) {
      if (j < best_col) {
        best_col = j;
        best = p;
      }
    } else {
      const double score = infeas * infeas / weight_[p];
      if (score > best_score) {
        best_score = score;
        best = p;
      }
    }
  }
  return best;
}

LpStatus DualSimplex::Impl::solve() {
  start_ = Clock::now();
  iterations_ = 0;
  if (!prepare_bounds()) return LpStatus::kInfeasible;
  if (!have_basis_) slack_basis();
  place_nonbasic();
  if (!refresh()) throw NumericalError("slack basis could not be factorized");

  int stalled = 0;
  int trouble = 0;
  bool fresh = true;
  std::vector<double> rho(static_cast<std::size_t>(m_));
  std::vector<double> column(static_cast<std::size_t>(m_));
  std::vector<Candidate> candidates;
  std::vector<int> flipped;

  while (true) {
    if (iterations_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
    if ((iterations_ & 63) == 0 && timed_out()) return LpStatus::kTimeLimit;
    if (static_cast<int>(factor_.eta_count()) >= opt_.refactor_interval) {
      if (!refresh()) throw NumericalError("basis became singular");
      fresh = true;
    }

    const int r = choose_leaving();
    if (r < 0) {
      if (fresh) break;
      if (!refresh()) throw NumericalError("basis became singular");
      fresh = true;
      continue;
    }

    const int p = head_[r];
    const bool to_lower = x_[p] < lb_[p];
    const double delta = to_lower ? lb_[p] - x_[p] : x_[p] - ub_[p];

    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);

    for (int j : touched_) alpha_[j] = 0.0;
    touched_.clear();
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (std::abs(ri) < kDropTol) continue;
      for (int e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
        const int j = lp_.row_col[e];
        if (status_[j] == VarStatus::kBasic) continue;
        if (alpha_[j] == 0.0) touched_.push_back(j);
        alpha_[j] += ri * lp_.row_val[e];
        if (alpha_[j] == 0.0) alpha_[j] = 1e-300;  // keep it tracked
      }
      if (status_[n_ + i] != VarStatus::kBasic) {
        touched_.push_back(n_ + i);
        alpha_[n_ + i] = -ri;
      }
    }

    candidates.clear();
    for (int j : touched_) {
      if (status_[j] == VarStatus::kFixed) continue;
      const double beta = to_lower ? -alpha_[j] : alpha_[j];
      if (status_[j] == VarStatus::kAtLower && beta > opt_.pivot_tol) {
        candidates.push_back({j, std::max(d_[j], 0.0) / beta, beta});
      } else if (status_[j] == VarStatus::kAtUpper && beta < -opt_.pivot_tol) {
        candidates.push_back({j, std::max(-d_[j], 0.0) / -beta, -beta});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.ratio != b.ratio ? a.ratio < b.ratio : a.col < b.col;
    });

    // Bound-flipping pass: breakpoints whose flip keeps the dual slope
    // positive are passed over and their variables flipped.
    // Stopping within tolerance keeps an exactly consumed infeasibility from
    // reading as a dual ray.
    double slope = delta;
    const double slope_tol = primal_tol(to_lower ? lb_[p] : ub_[p]);
    std::size_t k = 0;
    for (; k < candidates.size(); ++k) {
      const int j = candidates[k].col;
      const double after = slope - candidates[k].beta * (ub_[j] - lb_[j]);
      if (after <= slope_tol) break;
      slope = after;
    }
    if (k == candidates.size()) {
      if (!fresh) {
        if (!refresh()) throw NumericalError("basis became singular");
        fresh = true;
        continue;
      }
      return LpStatus::kInfeasible;
    }

    // Harris pass among the remaining breakpoints.
    std::size_t pick = k;
    if (bland_) {
      const double t0 = candidates[k].ratio;
      for (std::size_t s = k + 1; s < candidates.size() && candidates[s].ratio <= t0 + 1e-12; ++s) {
        if (candidates[s].col < candidates[pick].col) pick = s;
      }
    } else {
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t s = k; s < candidates.size(); ++s) {
        const int j = candidates[s].col;
        bound = std::min(bound, (std::abs(d_[j]) + opt_.dual_tol) / candidates[s].beta);
        if (candidates[s].ratio > bound) break;
      }
      for (std::size_t s = k; s < candidates.size() && candidates[s].ratio <= bound; ++s) {
        if (candidates[s].beta > candidates[pick].beta) pick = s;
      }
    }
    const int q = candidates[pick].col;
    const double t = candidates[pick].ratio;
    const double alpha_rq = alpha_[q];

    std::fill(column.begin(), column.end(), 0.0);
    for_column(q, [&](int i, double a) { column[i] = a; });
    factor_.ftran(column);
    if (std::abs(column[r] - alpha_rq) > 1e-6 * (1.0 + std::abs(alpha_rq)) ||
        std::abs(column[r]) < opt_.pivot_tol) {
      if (++trouble > 50) throw NumericalError("simplex pivots remain unstable after refactorization");
      if (fresh) {
        // The fresh factor disagrees with itself; restart from the slack basis.
        slack_basis();
        place_nonbasic();
      }
      if (!refresh()) throw NumericalError("basis became singular");
      fresh = true;
      continue;
    }

    if (k > 0) {
      flipped.clear();
      std::vector<double> shift(static_cast<std::size_t>(m_), 0.0);
      for (std::size_t s = 0; s < k; ++s) {
        const int j = candidates[s].col;
        const double old = x_[j];
        if (status_[j] == VarStatus::kAtLower) {
          status_[j] = VarStatus::kAtUpper;
          x_[j] = ub_[j];
        } else {
          status_[j] = VarStatus::kAtLower;
          x_[j] = lb_[j];
        }
        const double move = x_[j] - old;
        for_column(j, [&](int i, double a) { shift[i] += a * move; });
      }
      factor_.ftran(shift);
      for (int s = 0; s < m_; ++s) x_[head_[s]] -= shift[s];
    }

    const double target = to_lower ? lb_[p] : ub_[p];
    const double theta_p = (x_[p] - target) / column[r];
    for (int s = 0; s < m_; ++s) {
      if (column[s] != 0.0) x_[head_[s]] -= theta_p * column[s];
    }
    x_[q] += theta_p;
    x_[p] = target;

    const double theta_d = to_lower ? -t : t;
    for (int j : touched_) d_[j] -= theta_d * alpha_[j];
    d_[q] = 0.0;
    d_[p] = -theta_d;

    // Dual steepest-edge weights.
    double rho_norm = 0.0;
    for (double v : rho) rho_norm += v * v;
    std::vector<double> tau = rho;
    factor_.ftran(tau);
    const double pivot = column[r];
    for (int s = 0; s < m_; ++s) {
      if (s == r || column[s] == 0.0) continue;
      const double ratio = column[s] / pivot;
      weight_[s] = std::max(weight_[s] - 2.0 * ratio * tau[s] + ratio * ratio * rho_norm, kMinWeight);
    }
    weight_[r] = std::max(rho_norm / (pivot * pivot), kMinWeight);

    head_[r] = q;
    pos_of_[q] = r;
    pos_of_[p] = -1;
    status_[q] = VarStatus::kBasic;
    status_[p] = lb_[p] == ub_[p] ? VarStatus::kFixed
                 : to_lower       ? VarStatus::kAtLower
                                  : VarStatus::kAtUpper;
    factor_.update(r, column);
    fresh = false;
    trouble = 0;
    ++iterations_;
    ++total_iterations_;

    if (t <= 1e-12) {
      if (++stalled >= opt_.stall_threshold) bland_ = true;
    } else {
      stalled = 0;
      bland_ = false;
    }
  }

  for (int j = 0; j < n_; ++j) {
    if (at_artificial(j) && std::abs(d_[j]) > opt_.dual_tol) return LpStatus::kUnbounded;
  }
  return LpStatus::kOptimal;
}

double DualSimplex::Impl::max_primal_infeasibility() const {
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    worst = std::max({worst, struct_lb_[j] - x_[j], x_[j] - struct_ub_[j]});
  }
  for (int i = 0; i < m_; ++i) {
    double act = 0.0;
    for (int e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) act += lp_.row_val[e] * x_[lp_.row_col[e]];
    worst = std::max({worst, lp_.row_lb[i] - act, act - lp_.row_ub[i]});
  }
  return worst;
}

double DualSimplex::Impl::max_dual_infeasibility() const {
  double worst = 0.0;
  for (int j = 0; j < total_; ++j) {
    switch (status_[j]) {
      case VarStatus::kAtLower:
        worst = std::max(worst, -d_[j]);
        break;
      case VarStatus::kAtUpper:
        worst = std::max(worst, d_[j]);
        break;
      case VarStatus::kBasic:
        worst = std::max(worst, std::abs(d_[j]));
        break;
      case VarStatus::kFixed:
        break;
    }
  }
  return worst;
}

DualSimplex::DualSimplex(const LpProblem& lp, const LpOptions& options)
    : impl_(std::make_unique<Impl>(lp, options)) {}
DualSimplex::~DualSimplex() = default;
void DualSimplex::set_bounds(const std::vector<double>& lb, const std::vector<double>& ub) {
  impl_->set_bounds(lb, ub);
}
void DualSimplex::reset_basis() { impl_->reset_basis(); }
LpStatus DualSimplex::solve() { return impl_->solve(); }
std::vector<double> DualSimplex::primal() const { return impl_->primal(); }
std::vector<double> DualSimplex::duals() const { return impl_->duals(); }
std::vector<double> DualSimplex::reduced_costs() const { return impl_->reduced_costs(); }
double DualSimplex::objective() const { return impl_->objective(); }
std::int64_t DualSimplex::iterations() const { return impl_->iterations(); }
std::int64_t DualSimplex::total_iterations() const { return impl_->total_iterations(); }
double DualSimplex::max_primal_infeasibility() const { return impl_->max_primal_infeasibility(); }
double DualSimplex::max_dual_infeasibility() const { return impl_->max_dual_infeasibility(); }

LpResult solve_lp(const milp::MilpModel& model, const LpOptions& options) {
  const LpProblem lp = LpProblem::from_model(model);
  DualSimplex simplex(lp, options);
  LpResult out;
  out.status = simplex.solve();
  out.iterations = simplex.iterations();
  if (out.status == LpStatus::kOptimal) {
    out.assignment.values = simplex.primal();
    out.objective = lp.model_objective(simplex.objective());
  }
  return out;
}

}  // namespace stlcomm::solver
