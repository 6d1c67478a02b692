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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stlcomm/channel/gp.hpp"
#include "stlcomm/error.hpp"

namespace stlcomm::channel {
namespace {

ChannelHyperparams reference_hyperparams() { return {-12.89, 3.0, 10.0, 10.0, 2.0}; }

PositionPair pair(double sx, double sy, double rx, double ry) { return {{sx, sy}, {rx, ry}}; }

TEST(PairDistance, Examples) {
  const auto y = pair(0, 0, 1, 0);
  EXPECT_EQ(pair_distance(y, pair(0, 0, 1, 0)), 0.0);
  EXPECT_EQ(pair_distance(y, pair(1, 0, 0, 0)), 0.0);
  // min(|(0,0,1,0)-(0,0,2,0)|, |(0,0,1,0)-(2,0,0,0)|) = min(1, sqrt 5)
  EXPECT_DOUBLE_EQ(pair_distance(y, pair(0, 0, 2, 0)), 1.0);
}

TEST(PairDistance, SymmetryProperties) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    const auto a = pair(u(rng), u(rng), u(rng), u(rng));
    const auto b = pair(u(rng), u(rng), u(rng), u(rng));
    EXPECT_EQ(pair_distance(a, b), pair_distance(b, a));
    EXPECT_EQ(pair_distance(a, b), pair_distance(a.swapped(), b.swapped()));
    EXPECT_EQ(pair_distance(a, b), pair_distance(a.swapped(), b));
  }
}

TEST(PathLoss, Examples) {
  const auto h = reference_hyperparams();
  EXPECT_EQ(path_loss_mean(h, pair(0, 0, 1, 0)), -12.89);
  EXPECT_NEAR(path_loss_mean(h, pair(0, 0, 10, 0)), -42.89, 1e-12);
  EXPECT_THROW(path_loss_mean(h, pair(1, 1, 1, 1)), ValidationError);
}

TEST(Kernel, Examples) {
  const auto h = reference_hyperparams();
  const auto y = pair(0, 0, 3, 4);
  EXPECT_EQ(kernel(h, y, y), 10.0);
  EXPECT_EQ(kernel(h, y, y.swapped()), 10.0);
  // pair distance 2 with l = 2: 10 exp(-0.5)
  EXPECT_NEAR(kernel(h, pair(0, 0, 1, 0), pair(0, 0, 1, 2)), 6.0653065971263, 1e-10);
}

TEST(Kernel, BoundedBySignalVariance) {
  const auto h = reference_hyperparams();
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 500; ++i) {
    const auto a = pair(u(rng), u(rng), u(rng), u(rng));
    const auto b = pair(u(rng), u(rng), u(rng), u(rng));
    const double k = kernel(h, a, b);
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, h.sigma_k_sq);
  }
}

TEST(GpFit, EmptyTrainingSetIsPrior) {
  const auto h = reference_hyperparams();
  const auto m = GpChannelModel::fit(h, {});
  const auto y = pair(1, 2, 4, 6);
  EXPECT_EQ(m.predict_mean(y), path_loss_mean(h, y));
  EXPECT_EQ(m.predict_variance(y), h.sigma_k_sq + h.sigma_F_sq);
}

TEST(GpFit, InterpolatesWithoutFading) {
  auto h = reference_hyperparams();
  h.sigma_F_sq = 0.0;
  const std::vector<PairSample> samples{{pair(0, 0, 1, 0), -20.0},
                                        {pair(0, 0, 3, 1), -31.0},
                                        {pair(2, 2, 5, 5), -38.5}};
  const auto m = GpChannelModel::fit(h, samples);
  for (const auto& s : samples) {
    EXPECT_NEAR(m.predict_mean(s.pair), s.rssi, 1e-8);
    EXPECT_NEAR(m.predict_mean(s.pair.swapped()), s.rssi, 1e-8);
    EXPECT_LE(std::abs(m.predict_variance(s.pair)), 1e-8);
  }
}

TEST(GpFit, DuplicateSamplesWithoutFadingFail) {
  auto h = reference_hyperparams();
  h.sigma_F_sq = 0.0;
  const std::vector<PairSample> samples{{pair(0, 0, 1, 0), -20.0}, {pair(0, 0, 1, 0), -21.0}};
  try {
    GpChannelModel::fit(h, samples);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("pivot 1"), std::string::npos);
  }
  // With fading noise the same data is fine.
  EXPECT_NO_THROW(GpChannelModel::fit(reference_hyperparams(), samples));
}

TEST(GpFit, TwoSampleMeanMatchesClosedForm) {
  const auto h = reference_hyperparams();
  const auto y1 = pair(0, 0, 2, 0);
  const auto y2 = pair(1, 1, 1, 4);
  const double z1 = -25.0, z2 = -30.0;
  const auto m = GpChannelModel::fit(h, {{y1, z1}, {y2, z2}});
  const auto y = pair(0.5, 0, 2, 1);

  // Explicit 2x2 inverse.
  const double k11 = h.sigma_k_sq + h.sigma_F_sq, k22 = k11;
  const double d12 = std::sqrt(std::min(1 + 1 + 1 + 16.0, 1 + 16 + 1 + 1.0));
  const double k12 = h.sigma_k_sq * std::exp(-d12 * d12 / 8.0);
  const double det = k11 * k22 - k12 * k12;
  const double r1 = z1 - (h.L0 - 30 * std::log10(2.0));
  const double r2 = z2 - (h.L0 - 30 * std::log10(3.0));
  const double w1 = (k22 * r1 - k12 * r2) / det;
  const double w2 = (-k12 * r1 + k11 * r2) / det;
  const auto dist = [](const PositionPair& a, const PositionPair& b) {
    const double s = std::pow(a.sender[0] - b.sender[0], 2) + std::pow(a.sender[1] - b.sender[1], 2) +
                     std::pow(a.receiver[0] - b.receiver[0], 2) + std::pow(a.receiver[1] - b.receiver[1], 2);
    const double c = std::pow(a.sender[0] - b.receiver[0], 2) + std::pow(a.sender[1] - b.receiver[1], 2) +
                     std::pow(a.receiver[0] - b.sender[0], 2) + std::pow(a.receiver[1] - b.sender[1], 2);
    return std::min(s, c);
  };
  const double c1 = h.sigma_k_sq * std::exp(-dist(y, y1) / 8.0);
  const double c2 = h.sigma_k_sq * std::exp(-dist(y, y2) / 8.0);
  const double expected = h.L0 - 30 * std::log10(std::hypot(1.5, 1.0)) + c1 * w1 + c2 * w2;
  EXPECT_NEAR(m.predict_mean(y), expected, 1e-10);

  const double quad = (k22 * c1 * c1 - 2 * k12 * c1 * c2 + k11 * c2 * c2) / det;
  EXPECT_NEAR(m.predict_variance(y), h.sigma_k_sq - quad + h.sigma_F_sq, 1e-10);
}

TEST(GpFit, VarianceBoundsAndFarField) {
  const auto h = reference_hyperparams();
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0, 4);
  std::vector<PairSample> samples;
  for (int i = 0; i < 12; ++i) {
    samples.push_back({pair(u(rng), u(rng), u(rng) + 5, u(rng)), -30 + u(rng)});
  }
  const auto m = GpChannelModel::fit(h, samples);
  for (int i = 0; i < 200; ++i) {
    const auto y = pair(u(rng), u(rng), u(rng) + 4.5, u(rng));
    const double v = m.predict_variance(y);
    EXPECT_GE(v, h.sigma_F_sq - 1e-9);
    EXPECT_LE(v, h.sigma_k_sq + h.sigma_F_sq + 1e-12);
  }
  const auto far = pair(100, 100, 130, 100);
  EXPECT_NEAR(m.predict_variance(far), h.sigma_k_sq + h.sigma_F_sq, 1e-9);
  EXPECT_NEAR(m.predict_mean(far), path_loss_mean(h, far), 1e-9);
}

TEST(GpFit, MeanCorrectionIsLinearInResiduals) {
  const auto h = reference_hyperparams();
  std::vector<PairSample> samples{{pair(0, 0, 2, 0), -25.0}, {pair(1, 1, 1, 4), -30.0},
                                  {pair(3, 0, 3, 3), -28.0}};
  std::vector<PairSample> scaled = samples;
  const double c = -2.5;
  for (auto& s : scaled) {
    const double m0 = path_loss_mean(h, s.pair);
    s.rssi = m0 + c * (s.rssi - m0);
  }
  const auto a = GpChannelModel::fit(h, samples);
  const auto b = GpChannelModel::fit(h, scaled);
  const auto y = pair(0.3, 0.7, 2.2, 2.9);
  const double prior = path_loss_mean(h, y);
  EXPECT_NEAR(b.predict_mean(y) - prior, c * (a.predict_mean(y) - prior), 1e-10);
}

TEST(GainMatrix, Reciprocal) {
  // Prior-only: RSSI = -50 dB at a separation of 10^(37.11/30) m.
  ChannelHyperparams h = reference_hyperparams();
  const auto m = GpChannelModel::fit(h, {});
  const double sep = std::pow(10.0, (-12.89 + 50.0) / 30.0);
  Grid g{2, sep, 0, 0};
  const auto gain = build_gain_matrix(m, g);
  // Partitions 1 and 3 are one cell apart along x.
  EXPECT_NEAR(gain.at(1, 3), -0.02, 1e-12);
}

TEST(GainMatrix, SinglePartitionUsesClampedDistance) {
  const auto h = reference_hyperparams();
  const auto gain = build_gain_matrix(GpChannelModel::fit(h, {}), Grid{1, 1.0, 0, 0});
  ASSERT_EQ(gain.size(), 1);
  EXPECT_NEAR(gain.at(1, 1), 1.0 / (h.L0 - 30 * std::log10(0.5)), 1e-12);
}

TEST(GainMatrix, PriorTwoByTwoGridByHand) {
  const auto h = reference_hyperparams();
  const Grid grid{2, 1.0, 0.0, 0.0};
  const auto gain = build_gain_matrix(GpChannelModel::fit(h, {}), grid);
  // Centers by hand: r=1 (a=1,b=1) (0.5,0.5); r=2 (0.5,1.5); r=3 (1.5,0.5); r=4 (1.5,1.5).
  const double cx[4] = {0.5, 0.5, 1.5, 1.5};
  const double cy[4] = {0.5, 1.5, 0.5, 1.5};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double dist = std::hypot(cx[i] - cx[j], cy[i] - cy[j]);
      if (i == j) dist = 0.5;
      EXPECT_NEAR(gain.G(i, j), 1.0 / (-12.89 - 30.0 * std::log10(dist)), 1e-14) << i << "," << j;
    }
  }
}

TEST(GainMatrix, SymmetricWithTrainingData) {
  const auto h = reference_hyperparams();
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0, 6);
  std::vector<PairSample> samples;
  for (int i = 0; i < 15; ++i) {
    samples.push_back({pair(u(rng), u(rng), u(rng), u(rng) + 6.5), -35 + u(rng)});
  }
  const auto gain = build_gain_matrix(GpChannelModel::fit(h, samples), Grid{3, 2.0, 0, 0});
  EXPECT_LE((gain.G - gain.G.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GainMatrix, PriorOrderedByDistance) {
  const Grid grid{3, 1.0, 0, 0};
  const auto gain = build_gain_matrix(GpChannelModel::fit(reference_hyperparams(), {}), grid);
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      for (int k = 1; k <= 9; ++k) {
        const double dj = partition_pair(grid, i, j).separation();
        const double dk = partition_pair(grid, i, k).separation();
        if (dj < dk - 1e-12) EXPECT_LT(gain.at(i, j), gain.at(i, k));
      }
    }
  }
}

TEST(GainMatrix, ExclusionBandAndMixedSign) {
  // L0 = 0.05 dB: RSSI at the diagonal's 0.5 m is ~9.1 dB, at 1 m is 0.05 dB.
  ChannelHyperparams h = reference_hyperparams();
  h.L0 = 0.05;
  EXPECT_THROW(build_gain_matrix(GpChannelModel::fit(h, {}), Grid{2, 1.0, 0, 0}),
               ValidationError);
  h.L0 = 5.0;  // positive nearby, negative far away
  EXPECT_THROW(build_gain_matrix(GpChannelModel::fit(h, {}), Grid{3, 1.0, 0, 0}),
               ValidationError);
}

TEST(TrainingCsv, ParsesAndValidates) {
  std::istringstream ok("sx,sy,rx,ry,rssi_db\n0,0,1,0,-20.5\n1,1,3,4,-33\n");
  const auto s = read_training_csv(ok);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].pair.receiver[1], 4.0);
  EXPECT_EQ(s[1].rssi, -33.0);
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_training_csv(bad_header), ValidationError);
  std::istringstream same("sx,sy,rx,ry,rssi_db\n1,1,1,1,-3\n");
  EXPECT_THROW(read_training_csv(same), ValidationError);
  std::istringstream junk("sx,sy,rx,ry,rssi_db\n1,1,x,1,-3\n");
  EXPECT_THROW(read_training_csv(junk), ValidationError);
}

}  // namespace
}  // namespace stlcomm::channel
