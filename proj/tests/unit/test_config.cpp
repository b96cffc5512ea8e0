#include "mts/config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace mts;

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto c = load_config("");
  EXPECT_DOUBLE_EQ(c.lts_length_s, 1.0);
  EXPECT_DOUBLE_EQ(c.sts_length_s, 0.1);
  EXPECT_EQ(c.sts_per_lts, 10);
  EXPECT_DOUBLE_EQ(c.bandwidth_per_sbs_hz, 10.0e6);
  EXPECT_DOUBLE_EQ(c.compute_per_sbs_gcps, 200.0);
  EXPECT_DOUBLE_EQ(c.arrival_mean, 50.0);
  EXPECT_DOUBLE_EQ(c.eta, 1e-6);
  EXPECT_EQ(c.num_users, 60);
  EXPECT_EQ(c.alg1_max_iters, 50);
  EXPECT_EQ(c.alg2_max_iters, 10);
  EXPECT_EQ(c.num_sbs, 4);
  ASSERT_EQ(c.task_types.size(), 3u);
  EXPECT_DOUBLE_EQ(c.task_types[0].delay_limit_s, 0.020);
  EXPECT_DOUBLE_EQ(c.task_types[2].model_param, 5.0);
}

TEST(Config, SingleKeyOverride) {
  auto expected = load_config("");
  expected.num_users = 10;
  EXPECT_EQ(load_config(R"({"num_users": 10})"), expected);
}

TEST(Config, SlotLengthMismatchNamesKey) {
  try {
    load_config(R"({"sts_length_s": 0.3, "lts_length_s": 1.0})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sts_length_s"), std::string::npos) << e.what();
  }
}

TEST(Config, MalformedDocumentThrows) {
  EXPECT_THROW(load_config("{not json"), ConfigError);
}

TEST(Config, UnknownKeyRejected) {
  EXPECT_THROW(load_config(R"({"num_userz": 3})"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  auto c = load_config(R"({"num_users": 7, "eta": 3e-7, "baseline": "FC"})");
  EXPECT_EQ(load_config(to_json(c)), c);
  EXPECT_EQ(to_json(load_config(to_json(c))), to_json(c));
}

TEST(Config, HashTracksContent) {
  auto a = load_config("");
  auto b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 43;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, SetValueAndKeys) {
  auto c = load_config("");
  set_config_value(c, "lyapunov_v", "1e5");
  EXPECT_DOUBLE_EQ(c.lyapunov_v, 1e5);
  set_config_value(c, "baseline", "\"TC\"");
  EXPECT_EQ(c.baseline, Baseline::TraditionalComputing);
  EXPECT_THROW(set_config_value(c, "num_users", "-1"), ConfigError);
  const auto keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "eta"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "num_users"), keys.end());
}

TEST(Config, EnvOverride) {
  ::setenv("MTSTEST_NUM_USERS", "12", 1);
  ::setenv("MTSTEST_ETA", "2e-6", 1);
  auto c = load_config("");
  apply_env_overrides(c, "MTSTEST_");
  ::unsetenv("MTSTEST_NUM_USERS");
  ::unsetenv("MTSTEST_ETA");
  EXPECT_EQ(c.num_users, 12);
  EXPECT_DOUBLE_EQ(c.eta, 2e-6);
}

TEST(Config, BaselineNames) {
  EXPECT_EQ(parse_baseline("fa"), Baseline::FixedAllocation);
  EXPECT_EQ(parse_baseline("FC"), Baseline::FixedChannel);
  EXPECT_EQ(parse_baseline("proposed"), Baseline::None);
  EXPECT_EQ(to_string(Baseline::TraditionalComputing), "TC");
  EXPECT_THROW(parse_baseline("XX"), std::invalid_argument);
  EXPECT_THROW(load_config(R"({"baseline": "XX"})"), ConfigError);
}

TEST(Config, DbmConversion) {
  EXPECT_NEAR(dbm_to_watts(37.0), 5.0119, 1e-4);
  EXPECT_NEAR(dbm_to_watts(-100.0), 1e-13, 1e-25);
}
