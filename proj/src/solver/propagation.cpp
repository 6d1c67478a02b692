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

#include "propagation.hpp"

#include <cmath>
#include <deque>

namespace stlcomm::solver {

namespace {

constexpr double kRoundTol = 1e-6;
constexpr double kRowTol = 1e-6;

}  // namespace

bool Propagator::run(std::vector<double>& lb, std::vector<double>& ub,
                     const std::vector<int>& seeds) const {
  const int m = lp_.num_rows;
  std::vector<char> queued(static_cast<std::size_t>(m), 0);
  std::deque<int> work;
  auto enqueue_column = [&](int j) {
    for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
      const int i = lp_.col_row[e];
      if (!queued[i]) {
        queued[i] = 1;
        work.push_back(i);
      }
    }
  };
  if (seeds.empty()) {
    for (int i = 0; i < m; ++i) {
      queued[i] = 1;
      work.push_back(i);
    }
  } else {
    for (int j : seeds) enqueue_column(j);
  }

  std::int64_t budget = 20 * static_cast<std::int64_t>(m) + 1000;
  while (!work.empty() && budget-- > 0) {
    const int i = work.front();
    work.pop_front();
    queued[i] = 0;

    double min_act = 0.0;
    double max_act = 0.0;
    int min_inf = 0;
    int max_inf = 0;
    for (int e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
      const int j = lp_.row_col[e];
      const double a = lp_.row_val[e];
      const double lo = a > 0 ? a * lb[j] : a * ub[j];
      const double hi = a > 0 ? a * ub[j] : a * lb[j];
      if (std::isfinite(lo)) min_act += lo; else ++min_inf;
      if (std::isfinite(hi)) max_act += hi; else ++max_inf;
    }
    const double rl = lp_.row_lb[i];
    const double ru = lp_.row_ub[i];
    if (min_inf == 0 && std::isfinite(ru) && min_act > ru + kRowTol * (1.0 + std::abs(ru))) return false;
    if (max_inf == 0 && std::isfinite(rl) && max_act < rl - kRowTol * (1.0 + std::abs(rl))) return false;

    for (int e = lp_.row_start[i]; e < lp_.row_start[i + 1]; ++e) {
      const int j = lp_.row_col[e];
      if (!lp_.integer[j]) continue;
      const double a = lp_.row_val[e];
      const double lo = a > 0 ? a * lb[j] : a * ub[j];
      const double hi = a > 0 ? a * ub[j] : a * lb[j];
      bool changed = false;
      if (std::isfinite(ru)) {
        double rest = 0.0;
        bool ok = true;
        if (min_inf == 0) {
          rest = min_act - lo;
        } else if (min_inf == 1 && !std::isfinite(lo)) {
          rest = min_act;
        } else {
          ok = false;
        }
        if (ok) {
          const double limit = (ru - rest) / a;
          if (a > 0) {
            const double nu = std::floor(limit + kRoundTol);
            if (nu < ub[j]) { ub[j] = nu; changed = true; }
          } else {
            const double nl = std::ceil(limit - kRoundTol);
            if (nl > lb[j]) { lb[j] = nl; changed = true; }
          }
        }
      }
      if (std::isfinite(rl)) {
        double rest = 0.0;
        bool ok = true;
        if (max_inf == 0) {
          rest = max_act - hi;
        } else if (max_inf == 1 && !std::isfinite(hi)) {
          rest = max_act;
        } else {
          ok = false;
        }
        if (ok) {
          const double limit = (rl - rest) / a;
          if (a > 0) {
            const double nl = std::ceil(limit - kRoundTol);
            if (nl > lb[j]) { lb[j] = nl; changed = true; }
          } else {
            const double nu = std::floor(limit + kRoundTol);
            if (nu < ub[j]) { ub[j] = nu; changed = true; }
          }
        }
      }
      if (changed) {
        if (lb[j] > ub[j]) return false;
        enqueue_column(j);
      }
    }
  }
  return true;
}

}  // namespace stlcomm::solver
