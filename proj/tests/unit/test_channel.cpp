#include "mts/channel.hpp"
#include "mts/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mts;

TEST(Channel, LosPathLoss) {
  EXPECT_NEAR(path_loss_los(1.0, 1.0), 28.0, 1e-12);
  EXPECT_NEAR(path_loss_los(100.0, 3.5), 82.881, 1e-3);
  EXPECT_NEAR(path_loss_los(10.0, 1.0), 50.0, 1e-12);
}

TEST(Channel, NlosPathLoss) {
  EXPECT_NEAR(path_loss_nlos(1.0, 1.0), 22.7, 1e-12);
  EXPECT_NEAR(path_loss_nlos(100.0, 3.5), 110.245, 1e-3);
  EXPECT_NEAR(path_loss_nlos(10.0, 1.0), 59.4, 1e-12);
}

TEST(Channel, LosProbability) {
  EXPECT_DOUBLE_EQ(los_probability(18.0), 1.0);
  EXPECT_NEAR(los_probability(36.0), 0.68394, 1e-5);
  EXPECT_DOUBLE_EQ(los_probability(9.0), 1.0);
  EXPECT_NEAR(los_probability(100.0), 0.23098474969813537, 1e-15);
}

TEST(Channel, GainSingleBranch) {
  // p_LoS = 1 at d = 1 and a carrier that puts the LoS loss at exactly 30 dB
  EXPECT_NEAR(channel_gain(1.0, std::pow(10.0, 0.1)), 1e-3, 1e-15);
}

TEST(Channel, GainAtHundredMeters) {
  // frozen from the independent re-derivation
  EXPECT_NEAR(channel_gain(100.0, 3.5), 1.2281428131607296e-11, 1e-24);
  EXPECT_NEAR(channel_gain(100.0, 3.5), oracle::channel_gain(100.0, 3.5), 1e-25);
  EXPECT_LT(channel_gain(200.0, 3.5), channel_gain(100.0, 3.5));
}

TEST(Channel, GainStrictlyDecreasing) {
  const double diag = 200.0 * std::sqrt(2.0);
  double prev = channel_gain(0.5, 3.5);
  for (double d = 0.6; d <= diag; d += 0.1) {
    const double g = channel_gain(d, 3.5);
    ASSERT_LT(g, prev) << "d=" << d;
    prev = g;
  }
}

TEST(Channel, LosProbabilityBounded) {
  for (double d = 0.01; d <= 283.0; d += 0.07) {
    const double p = los_probability(d);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
}

TEST(Channel, InterferenceSingleSbsIsZero) {
  Matrix g(1, 1, 1e-9);
  EXPECT_EQ(interference(0, 0, g, 2.0, InterferenceModel::OwnLeakage), 0.0);
}

TEST(Channel, InterferenceDirectSum) {
  Matrix g(1, 3);
  g(0, 0) = 1e-9;
  g(0, 1) = 2e-9;
  g(0, 2) = 3e-9;
  EXPECT_DOUBLE_EQ(interference(0, 1, g, 2.0, InterferenceModel::OwnLeakage), 2.0 * (1e-9 + 3e-9));
}

TEST(Channel, InterferenceMatchesOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int U = 1 + rng.index(8), K = 1 + rng.index(5);
    Matrix g(U, K);
    for (int u = 0; u < U; ++u)
      for (int k = 0; k < K; ++k) g(u, k) = rng.uniform(1e-12, 1e-8);
    const double p = rng.uniform(0.1, 5.0);
    for (int u = 0; u < U; ++u)
      for (int k = 0; k < K; ++k)
        EXPECT_NEAR(interference(u, k, g, p, InterferenceModel::OwnLeakage), oracle::interference_own_leakage(g, u, k, p),
                    1e-22);
  }
}

TEST(Channel, CrossUserInterference) {
  Matrix g(3, 2);
  g(0, 0) = 1.0;
  g(1, 0) = 2.0;
  g(2, 0) = 4.0;
  const int assoc[] = {0, 1, -1};
  // only user 1 transmits to another SBS; user 2 is silent
  EXPECT_DOUBLE_EQ(interference(0, 0, g, 1.0, InterferenceModel::CrossUser, assoc), 2.0);
}

TEST(Channel, UplinkRate) {
  EXPECT_EQ(uplink_rate(0.0, 1.0, 1.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(uplink_rate(1e6, 1.0, 1.0, 0.5, 0.5), 1e6);
  EXPECT_DOUBLE_EQ(uplink_rate(1e6, 3.0, 1.0, 0.5, 0.5), 2e6);
  const double sinr = std::pow(10.0, 1.5);
  EXPECT_NEAR(uplink_rate(10e6, sinr, 1.0, 0.0, 1.0), 50.3e6, 0.05e6);
}

TEST(Channel, UplinkRateMonotone) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double w = rng.uniform(1e3, 1e7), p = rng.uniform(0.1, 5), g = rng.uniform(1e-13, 1e-9);
    const double in = rng.uniform(0, 1e-10), n = 1e-13;
    const double r = uplink_rate(w, p, g, in, n);
    EXPECT_GE(uplink_rate(w * 1.1, p, g, in, n), r);
    EXPECT_GE(uplink_rate(w, p, g * 1.1, in, n), r);
    EXPECT_LE(uplink_rate(w, p, g, in * 1.1 + 1e-15, n), r);
    EXPECT_LE(uplink_rate(2 * w, p, g, in, n), 2 * r * (1 + 1e-15));
  }
}

TEST(Channel, StateFromTopology) {
  ScenarioConfig cfg;
  Rng rng(42, stream::kTopology);
  const auto top = place_topology(cfg, rng);
  const auto ch = build_channel_state(top, cfg);
  ASSERT_EQ(ch.num_users(), 60u);
  ASSERT_EQ(ch.num_sbs(), 4u);
  for (std::size_t u = 0; u < 60; ++u) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_GE(ch.distance(u, k), cfg.min_distance_m);
      EXPECT_NEAR(ch.gain(u, k), channel_gain(ch.distance(u, k), cfg.carrier_freq_ghz), 1e-25);
      EXPECT_NEAR(ch.interference(u, k),
                  oracle::interference_own_leakage(ch.gain, u, k, ch.transmit_power_w), 1e-20);
    }
  }
  const auto near = nearest_sbs(ch.distance);
  for (std::size_t u = 0; u < 60; ++u)
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(ch.distance(u, near[u]), ch.distance(u, k));
}
