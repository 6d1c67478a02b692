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

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "stlcomm/geometry.hpp"

namespace stlcomm::channel {

// Log-distance path loss with Gaussian-process shadowing. All RSSI values in
// dB.
struct ChannelHyperparams {
  double L0 = -12.89;        // received power at 1 m
  double n_l = 3.0;          // path-loss exponent
  double sigma_F_sq = 10.0;  // fading variance, dB^2
  double sigma_k_sq = 10.0;  // shadowing variance, dB^2
  double length_scale = 2.0; // shadowing correlation length, m

  void validate() const;
};

struct PositionPair {
  Vec2 sender{};
  Vec2 receiver{};

  PositionPair swapped() const { return {receiver, sender}; }
  double separation() const;
};

struct PairSample {
  PositionPair pair;
  double rssi = 0.0;
};

// Distance between position pairs, invariant to swapping sender and receiver
// of the second pair.
double pair_distance(const PositionPair& y, const PositionPair& y2);

// L0 - 10 n_l log10(|p_s - p_r|). Throws on zero separation.
double path_loss_mean(const ChannelHyperparams& h, const PositionPair& y);

// Squared-exponential shadowing covariance over pair_distance.
double kernel(const ChannelHyperparams& h, const PositionPair& y, const PositionPair& y2);

struct FitOptions {
  double jitter = 1e-9;            // dB^2, added once if factorization fails
  double relative_pivot_floor = 1e-9;
};

// GP posterior over RSSI. Immutable after fit().
class GpChannelModel {
 public:
  static GpChannelModel fit(const ChannelHyperparams& h, std::vector<PairSample> samples,
                            const FitOptions& options = {});

  double predict_mean(const PositionPair& y) const;
  double predict_variance(const PositionPair& y) const;

  const ChannelHyperparams& hyperparams() const { return h_; }
  const std::vector<PairSample>& samples() const { return samples_; }
  // Jitter that was actually added to the kernel diagonal (0 if none).
  double applied_jitter() const { return applied_jitter_; }

 private:
  GpChannelModel() = default;

  Eigen::VectorXd covariance_to_training(const PositionPair& y) const;

  ChannelHyperparams h_;
  std::vector<PairSample> samples_;
  Eigen::MatrixXd chol_;    // lower factor of C_T + sigma_F^2 I
  Eigen::VectorXd weights_; // (C_T + sigma_F^2 I)^-1 (z_T - m(Y_T))
  double applied_jitter_ = 0.0;
};

struct GainMatrix {
  Eigen::MatrixXd G;  // 1/RSSI between partition centers, 1/dB
  Grid grid;

  int size() const { return static_cast<int>(G.rows()); }
  // 1-based partition indices.
  double at(int i, int j) const { return G(i - 1, j - 1); }
};

struct GainOptions {
  double rssi_exclusion_db = 0.1;  // |RSSI| below this is rejected
};

// Pair positions used for partitions i and j. Same-partition pairs sit d/2
// apart, symmetric about the center.
PositionPair partition_pair(const Grid& grid, int i, int j);

GainMatrix build_gain_matrix(const GpChannelModel& model, const Grid& grid,
                             const GainOptions& options = {});

// CSV with header sx,sy,rx,ry,rssi_db.
std::vector<PairSample> read_training_csv(std::istream& in);
std::vector<PairSample> load_training_csv(const std::string& path);

}  // namespace stlcomm::channel
