#include "mts/engine.hpp"
#include "mts/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace mts;

TEST(Engine, EmptySystem) {
  ScenarioConfig cfg;
  cfg.num_lts = 1;
  cfg.num_users = 0;
  const auto r = run(cfg);
  ASSERT_EQ(r.lts.size(), 1u);
  EXPECT_EQ(r.lts[0].utility, 0.0);
  for (const auto& s : r.sts) EXPECT_EQ(s.queues, QueueState{});
  EXPECT_TRUE(r.lts[0].drift.holds);
}

TEST(Engine, Deterministic) {
  ScenarioConfig cfg;
  cfg.num_lts = 3;
  const auto a = run(cfg), b = run(cfg);
  EXPECT_EQ(a.lts, b.lts);
  EXPECT_EQ(a.sts, b.sts);
  std::ostringstream sa, sb;
  write_lts_csv(sa, a.lts, 3);
  write_lts_csv(sb, b.lts, 3);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Engine, DefaultScenarioHoldsBound) {
  ScenarioConfig cfg;
  const auto r = run(cfg);
  ASSERT_EQ(r.lts.size(), 10u);
  ASSERT_EQ(r.sts.size(), 100u);
  for (const auto& l : r.lts) {
    EXPECT_TRUE(l.drift.holds) << l.lts_index;
    EXPECT_EQ(l.utility, l.revenue - l.eta * l.cost);  // bit-exact identity
  }
  EXPECT_EQ(r.total_violations(), 0);
}

TEST(Engine, StreamIgnoresDecisions) {
  ScenarioConfig a;
  a.num_users = 10;
  auto b = a;
  b.baseline = Baseline::FixedAllocation;
  ScenarioStream sa(a), sb(b);
  for (int l = 0; l < 2; ++l) {
    const auto ca = sa.next_lts(), cb = sb.next_lts();
    EXPECT_EQ(ca.v, cb.v);
    for (std::size_t t = 0; t < ca.num_sts(); ++t) {
      EXPECT_EQ(ca.channels[t].gain, cb.channels[t].gain);
      EXPECT_EQ(ca.demands[t].raw_bytes, cb.demands[t].raw_bytes);
    }
  }
}

TEST(Engine, FixedAllocationIsInitialPoint) {
  ScenarioConfig cfg;
  cfg.num_users = 1;
  cfg.baseline = Baseline::FixedAllocation;
  ScenarioStream stream(cfg);
  const auto ctx = stream.next_lts();
  const auto params = AllocationParams::from_config(cfg);
  ASSERT_EQ(params.mode, AllocationMode::FixedAllocation);
  const std::vector<int> y{1};
  const auto model = planning_model(cfg);
  StsProblem sts;
  sts.channel = &ctx.channels[0];
  const auto& d0 = ctx.demands[0];
  const auto& t = cfg.task_types[d0.task_type[0]];
  sts.bits = {d0.raw_bits(0)};
  sts.work_gc = {model.gigacycles(d0.raw_bytes[0], t.model_param)};
  sts.delay_limit = {t.delay_limit_s};
  const auto d = allocate_sts({}, y, sts, params);
  const auto init = initial_allocation(y, ctx.channels[0], params);
  EXPECT_EQ(d.x, init.x);
  EXPECT_EQ(d.w, init.w);
  EXPECT_EQ(d.f, init.f);
}

TEST(Engine, BaselinesRun) {
  ScenarioConfig cfg;
  cfg.num_lts = 2;
  for (auto b : {Baseline::FixedAllocation, Baseline::FixedChannel, Baseline::TraditionalComputing}) {
    const auto r = run_baseline(cfg, b);
    EXPECT_EQ(r.lts.size(), 2u);
    for (const auto& l : r.lts) EXPECT_TRUE(l.drift.holds) << to_string(b);
  }
}

TEST(Engine, FixedAdmissionTraceShape) {
  ScenarioConfig cfg;
  cfg.num_users = 5;
  const auto t = simulate_fixed_admission(cfg, std::vector<int>(5, 1), 30);
  EXPECT_EQ(t.states.size(), 31u);
  EXPECT_EQ(t.served_bits.size(), 30u);
  EXPECT_EQ(t.arrived_bits.size(), 30u);
}

TEST(Engine, RejectsBadConfig) {
  ScenarioConfig cfg;
  cfg.sts_length_s = 0.3;
  EXPECT_THROW(run(cfg), ConfigError);
}
