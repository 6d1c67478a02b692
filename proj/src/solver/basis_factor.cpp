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

#include "basis_factor.hpp"

#include <cmath>

namespace stlcomm::solver {

bool BasisFactor::factorize(const std::vector<int>& head) {
  const int n = lp_.num_cols;
  m_ = lp_.num_rows;
  etas_.clear();
  struct_pos_.clear();
  struct_col_.clear();
  free_rows_.clear();
  logical_pos_.assign(static_cast<std::size_t>(m_), -1);

  for (int p = 0; p < m_; ++p) {
    const int j = head[p];
    if (j >= n) {
      logical_pos_[j - n] = p;
    } else {
      struct_pos_.push_back(p);
      struct_col_.push_back(j);
    }
  }
  std::vector<int> row_index(static_cast<std::size_t>(m_), -1);
  for (int i = 0; i < m_; ++i) {
    if (logical_pos_[i] < 0) {
      row_index[i] = static_cast<int>(free_rows_.size());
      free_rows_.push_back(i);
    }
  }
  const int k = static_cast<int>(struct_col_.size());
  if (static_cast<int>(free_rows_.size()) != k) return false;
  lu_.reset();
  if (k == 0) return true;

  std::vector<Eigen::Triplet<double>> trips;
  for (int t = 0; t < k; ++t) {
    const int j = struct_col_[t];
    for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
      const int r = row_index[lp_.col_row[e]];
      if (r >= 0) trips.emplace_back(r, t, lp_.col_val[e]);
    }
  }
  Eigen::SparseMatrix<double> block(k, k);
  block.setFromTriplets(trips.begin(), trips.end());
  block.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->analyzePattern(block);
  lu_->factorize(block);
  if (lu_->info() != Eigen::Success) {
    lu_.reset();
    return false;
  }
  // SparseLU only reports exact zero pivots; reject near-singular blocks too.
  const double log_det = lu_->logAbsDeterminant();
  if (!std::isfinite(log_det)) {
    lu_.reset();
    return false;
  }
  return true;
}

void BasisFactor::ftran(std::vector<double>& v) const {
  const int k = static_cast<int>(struct_col_.size());
  std::vector<double> out(static_cast<std::size_t>(m_), 0.0);
  if (k > 0) {
    Eigen::VectorXd rhs(k);
    for (int r = 0; r < k; ++r) rhs[r] = v[free_rows_[r]];
    const Eigen::VectorXd zs = lu_->solve(rhs);
    std::vector<double> acc(static_cast<std::size_t>(m_), 0.0);
    for (int t = 0; t < k; ++t) {
      out[struct_pos_[t]] = zs[t];
      if (zs[t] == 0.0) continue;
      const int j = struct_col_[t];
      for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
        acc[lp_.col_row[e]] += lp_.col_val[e] * zs[t];
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (logical_pos_[i] >= 0) out[logical_pos_[i]] = acc[i] - v[i];
    }
  } else {
    for (int i = 0; i < m_; ++i) out[logical_pos_[i]] = -v[i];
  }
  for (const Eta& eta : etas_) {
    double& zr = out[eta.pos];
    if (zr == 0.0) continue;
    zr /= eta.pivot;
    for (const auto& [i, val] : eta.entries) out[i] -= val * zr;
  }
  v.swap(out);
}

void BasisFactor::btran(std::vector<double>& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pos];
    for (const auto& [i, val] : it->entries) s -= val * v[i];
    v[it->pos] = s / it->pivot;
  }
  std::vector<double> y(static_cast<std::size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    if (logical_pos_[i] >= 0) y[i] = -v[logical_pos_[i]];
  }
  const int k = static_cast<int>(struct_col_.size());
  if (k > 0) {
    Eigen::VectorXd rhs(k);
    for (int t = 0; t < k; ++t) {
      double s = v[struct_pos_[t]];
      const int j = struct_col_[t];
      for (int e = lp_.col_start[j]; e < lp_.col_start[j + 1]; ++e) {
        const int i = lp_.col_row[e];
        if (logical_pos_[i] >= 0) s -= lp_.col_val[e] * y[i];
      }
      rhs[t] = s;
    }
    const Eigen::VectorXd yr = lu_->transpose().solve(rhs);
    for (int r = 0; r < k; ++r) y[free_rows_[r]] = yr[r];
  }
  v.swap(y);
}

void BasisFactor::update(int pos, const std::vector<double>& column) {
  Eta eta;
  eta.pos = pos;
  eta.pivot = column[pos];
  for (int i = 0; i < m_; ++i) {
    if (i != pos && column[i] != 0.0) eta.entries.emplace_back(i, column[i]);
  }
  etas_.push_back(std::move(eta));
}

}  // namespace stlcomm::solver
