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

#include "stlcomm/channel/gp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "stlcomm/error.hpp"

namespace stlcomm::channel {

void ChannelHyperparams::validate() const {
  if (!std::isfinite(L0)) throw ValidationError("channel/L0", "must be finite");
  if (!(n_l > 0.0)) throw ValidationError("channel/n_l", "must be positive");
  if (!(sigma_F_sq >= 0.0)) throw ValidationError("channel/sigma_F_sq", "must be >= 0");
  if (!(sigma_k_sq >= 0.0)) throw ValidationError("channel/sigma_k_sq", "must be >= 0");
  if (!(length_scale > 0.0)) throw ValidationError("channel/l", "must be positive");
}

double PositionPair::separation() const {
  return std::hypot(sender[0] - receiver[0], sender[1] - receiver[1]);
}

namespace {

double sq(double v) { return v * v; }

double sq_dist(const Vec2& a, const Vec2& b) { return sq(a[0] - b[0]) + sq(a[1] - b[1]); }

}  // namespace

double pair_distance(const PositionPair& y, const PositionPair& y2) {
  const double direct = sq_dist(y.sender, y2.sender) + sq_dist(y.receiver, y2.receiver);
  const double crossed = sq_dist(y.sender, y2.receiver) + sq_dist(y.receiver, y2.sender);
  return std::sqrt(std::min(direct, crossed));
}

double path_loss_mean(const ChannelHyperparams& h, const PositionPair& y) {
  const double dist = y.separation();
  if (!(dist > 0.0)) throw ValidationError("path loss undefined at zero sender-receiver distance");
  return h.L0 - 10.0 * h.n_l * std::log10(dist);
}

double kernel(const ChannelHyperparams& h, const PositionPair& y, const PositionPair& y2) {
  const double dd = pair_distance(y, y2);
  return h.sigma_k_sq * std::exp(-dd * dd / (2.0 * h.length_scale * h.length_scale));
}

namespace {

// Dense Cholesky; returns the index of the first pivot at or below `floor`,
// or -1 on success.
Eigen::Index cholesky(const Eigen::MatrixXd& a, double floor, Eigen::MatrixXd& l) {
  const Eigen::Index n = a.rows();
  l.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > floor)) return j;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return -1;
}

}  // namespace

GpChannelModel GpChannelModel::fit(const ChannelHyperparams& h, std::vector<PairSample> samples,
                                   const FitOptions& options) {
  h.validate();
  GpChannelModel m;
  m.h_ = h;
  m.samples_ = std::move(samples);
  const auto k = static_cast<Eigen::Index>(m.samples_.size());
  if (k == 0) return m;

  Eigen::MatrixXd c(k, k);
  Eigen::VectorXd residual(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& si = m.samples_[static_cast<std::size_t>(i)];
    if (!std::isfinite(si.rssi)) {
      throw ValidationError("training sample " + std::to_string(i) + " has non-finite rssi");
    }
    residual(i) = si.rssi - path_loss_mean(h, si.pair);
    for (Eigen::Index j = 0; j <= i; ++j) {
      c(i, j) = c(j, i) = kernel(h, si.pair, m.samples_[static_cast<std::size_t>(j)].pair);
    }
    c(i, i) += h.sigma_F_sq;
  }

  const double floor = options.relative_pivot_floor * c.diagonal().maxCoeff();
  Eigen::Index bad = cholesky(c, floor, m.chol_);
  if (bad >= 0 && options.jitter > 0.0) {
    c.diagonal().array() += options.jitter;
    m.applied_jitter_ = options.jitter;
    bad = cholesky(c, floor, m.chol_);
  }
  if (bad >= 0) {
    throw NumericalError("kernel matrix is not positive definite (pivot " +
                         std::to_string(bad) + "); check for duplicate samples");
  }
  const Eigen::VectorXd half = m.chol_.triangularView<Eigen::Lower>().solve(residual);
  m.weights_ = m.chol_.transpose().triangularView<Eigen::Upper>().solve(half);
  return m;
}

Eigen::VectorXd GpChannelModel::covariance_to_training(const PositionPair& y) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = kernel(h_, y, samples_[i].pair);
  }
  return out;
}

double GpChannelModel::predict_mean(const PositionPair& y) const {
  const double prior = path_loss_mean(h_, y);
  if (samples_.empty()) return prior;
  return prior + covariance_to_training(y).dot(weights_);
}

double GpChannelModel::predict_variance(const PositionPair& y) const {
  if (!(y.separation() > 0.0)) {
    throw ValidationError("prediction undefined at zero sender-receiver distance");
  }
  const double prior = h_.sigma_k_sq + h_.sigma_F_sq;
  if (samples_.empty()) return prior;
  const Eigen::VectorXd v =
      chol_.triangularView<Eigen::Lower>().solve(covariance_to_training(y));
  return prior - v.squaredNorm();
}

PositionPair partition_pair(const Grid& grid, int i, int j) {
  if (i != j) return {grid.center(i), grid.center(j)};
  const Vec2 c = grid.center(i);
  const double half = grid.d / 4.0;
  return {{c[0] - half, c[1]}, {c[0] + half, c[1]}};
}

GainMatrix build_gain_matrix(const GpChannelModel& model, const Grid& grid,
                             const GainOptions& options) {
  grid.validate();
  const int n = grid.cell_count();
  GainMatrix out{Eigen::MatrixXd(n, n), grid};
  int positives = 0;
  int negatives = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double rssi = model.predict_mean(partition_pair(grid, i, j));
      const std::string where = "partitions (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!std::isfinite(rssi)) throw ValidationError("non-finite RSSI between " + where);
      if (std::abs(rssi) <= options.rssi_exclusion_db) {
        throw ValidationError("RSSI " + std::to_string(rssi) + " dB between " + where +
                              " is within the 0 dB exclusion band");
      }
      (rssi > 0.0 ? positives : negatives)++;
      out.G(i - 1, j - 1) = 1.0 / rssi;
    }
  }
  if (positives > 0 && negatives > 0) {
    throw ValidationError("predicted RSSI changes sign across partitions (" +
                          std::to_string(positives) + " positive, " +
                          std::to_string(negatives) + " negative)");
  }
  return out;
}

std::vector<PairSample> read_training_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("training csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "sx,sy,rx,ry,rssi_db") {
    throw ValidationError("training csv: expected header sx,sy,rx,ry,rssi_db");
  }
  std::vector<PairSample> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[5];
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 5) throw ValidationError("training csv row " + std::to_string(row) + ": too many fields");
      try {
        std::size_t used = 0;
        v[k] = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("training csv row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
      ++k;
    }
    if (k != 5) throw ValidationError("training csv row " + std::to_string(row) + ": expected 5 fields");
    PairSample s{{{v[0], v[1]}, {v[2], v[3]}}, v[4]};
    if (!(s.pair.separation() > 0.0)) {
      throw ValidationError("training csv row " + std::to_string(row) +
                            ": sender and receiver coincide");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<PairSample> load_training_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open training samples '" + path + "'");
  return read_training_csv(in);
}

}  // namespace stlcomm::channel
