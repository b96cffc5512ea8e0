#include "mts/queues.hpp"
#include "mts/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mts;

namespace {

ComplexityModel per_byte(double c) {
  ComplexityModel m;
  m.linear_gc_per_byte = c;
  m.floor_gc = 0.0;
  return m;
}

SlotFlows one_user(int y, double r, double a, double f, double n = 1.0, double work = 0.0) {
  return SlotFlows{{y}, {r}, {a}, {f}, {n}, {work}};
}

SlotFlows random_flows(Rng& rng, int U, double bus_bps, double tau, const ComplexityModel& m) {
  SlotFlows f;
  for (int u = 0; u < U; ++u) {
    f.admitted.push_back(rng.index(3) > 0 ? 1 : 0);
    f.rate_bps.push_back(rng.uniform(0, 5e6));
    f.arrivals_bits.push_back(rng.uniform(0, 8e5));
    f.compute_gcps.push_back(rng.uniform(0, 50));
    f.model_param.push_back(1.0 + 2.0 * rng.index(3));
  }
  f.bus_work_gc = bus_slot_work(f.admitted, f.model_param, bus_bps, tau, m);
  return f;
}

}  // namespace

TEST(Queues, OffloadingExamples) {
  const int y[] = {1};
  const double r4[] = {40.0}, r5[] = {50.0}, a2[] = {2.0};
  EXPECT_DOUBLE_EQ(update_offloading({10, 0, 0}, y, r4, a2, 0.1), 8.0);
  EXPECT_DOUBLE_EQ(update_offloading({3, 0, 0}, y, r5, a2, 0.1), 2.0);
  const int none[] = {0};
  EXPECT_DOUBLE_EQ(update_offloading({7, 0, 0}, none, r5, a2, 0.1), 7.0);
}

TEST(Queues, BusExamples) {
  const int y[] = {1};
  const double r[] = {10.0};
  EXPECT_DOUBLE_EQ(update_bus({0, 0, 0}, y, r, 5.0, 0.1), 0.0);
  // service 2, inflow min(1, Phi_I = 6) = 1
  EXPECT_DOUBLE_EQ(update_bus({6, 5, 0}, y, r, 20.0, 0.1), 4.0);
}

TEST(Queues, ProcessingExamples) {
  const auto m = per_byte(1.0);
  auto idle = one_user(0, 1e6, 0, 1e3);
  idle.bus_work_gc = bus_slot_work(idle.admitted, idle.model_param, 1e9, 0.1, m);
  EXPECT_DOUBLE_EQ(update_processing({0, 50, 10}, idle, 0.1, m), 10.0);
  // service tau*f = 3; bus share 16 bits = 2 bytes -> 2 Gc, far below a full bus slot
  auto busy = one_user(1, 1.0, 0, 30.0);
  busy.bus_work_gc = bus_slot_work(busy.admitted, busy.model_param, 1e9, 0.1, m);
  EXPECT_DOUBLE_EQ(update_processing({0, 16, 10}, busy, 0.1, m), 9.0);
}

TEST(Queues, Lyapunov) {
  EXPECT_EQ(lyapunov({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(lyapunov({1, 2, 3}), 7.0);
  EXPECT_DOUBLE_EQ(lyapunov({3, 1, 2}), 7.0);
  EXPECT_DOUBLE_EQ(lyapunov({2, 3, 1}), 7.0);
}

TEST(Queues, BoundConstantZeroTrace) {
  LtsTrace t;
  t.tau = 0.1;
  t.bus_bps = 0.0;
  t.flows = {one_user(0, 0, 0, 0)};
  t.states = {{}, {}};
  EXPECT_EQ(drift_bound_constant(t), 0.0);
}

TEST(Queues, BoundConstantHandExpansion) {
  LtsTrace t;
  t.tau = 0.1;
  t.bus_bps = 5.0;
  t.flows = {one_user(1, 10.0, 2.0, 20.0, 1.0, 3.0)};
  t.states = {{}, {}};
  // 1/2 (1^2 + 2^2 + 0.5^2 + 1^2 + 2^2 + 3^2)
  EXPECT_DOUBLE_EQ(drift_bound_constant(t), 9.625);
  LtsTrace s = t;
  s.bus_bps *= 2;
  s.flows = {one_user(1, 20.0, 4.0, 40.0, 1.0, 6.0)};
  EXPECT_DOUBLE_EQ(drift_bound_constant(s), 4 * 9.625);
}

TEST(Queues, DriftBoundIdleSystem) {
  LtsTrace t;
  t.flows = {one_user(0, 0, 0, 0)};
  t.states = {{}, {}};
  const auto rec = check_theorem1(t, 1e4, 0.0);
  EXPECT_EQ(rec.lhs, 0.0);
  EXPECT_GE(rec.bound_rhs, 0.0);
  EXPECT_TRUE(rec.holds);
}

TEST(Queues, DriftBoundNegativeControl) {
  const auto m = per_byte(1e-6);
  LtsTrace t;
  t.tau = 0.1;
  t.bus_bps = 1e9;
  t.flows = {one_user(1, 0.0, 8e5, 0.0)};
  t.flows[0].bus_work_gc = bus_slot_work(t.flows[0].admitted, t.flows[0].model_param, t.bus_bps, t.tau, m);
  t.states = {{}, step_queues({}, t.flows[0], t.bus_bps, t.tau, m)};
  EXPECT_TRUE(check_theorem1(t, 1.0, 0.0).holds);
  EXPECT_FALSE(check_theorem1(t, 1.0, 0.0, 0, 0.0).holds);
}

TEST(Queues, RandomTracesMatchReplayAndBound) {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const double tau = 0.1, bus = rng.uniform(1e5, 1e7);
    const auto m = per_byte(rng.uniform(1e-7, 1e-5));
    LtsTrace t;
    t.tau = tau;
    t.bus_bps = bus;
    QueueState q{rng.uniform(0, 1e6), rng.uniform(0, 1e6), rng.uniform(0, 10)};
    t.states.push_back(q);
    const int U = 1 + rng.index(6);
    auto first = random_flows(rng, U, bus, tau, m);
    for (int s = 0; s < 10; ++s) {
      auto f = random_flows(rng, U, bus, tau, m);
      f.admitted = first.admitted;  // y is fixed over an LTS
      f.bus_work_gc = bus_slot_work(f.admitted, f.model_param, bus, tau, m);
      const auto next = step_queues(q, f, bus, tau, m);
      const auto ref = oracle::replay_step(q, f, bus, tau, m);
      ASSERT_NEAR(next.offload_bits, ref.offload_bits, 1e-9 * (1 + ref.offload_bits));
      ASSERT_NEAR(next.bus_bits, ref.bus_bits, 1e-9 * (1 + ref.bus_bits));
      ASSERT_NEAR(next.processing_gc, ref.processing_gc, 1e-9 * (1 + ref.processing_gc));
      // nonnegativity and tandem caps
      ASSERT_GE(next.offload_bits, 0.0);
      ASSERT_GE(next.bus_bits, 0.0);
      ASSERT_GE(next.processing_gc, 0.0);
      double served = 0.0;
      int n = 0;
      for (int u = 0; u < U; ++u) {
        served += tau * f.admitted[u] * f.rate_bps[u];
        n += f.admitted[u];
      }
      const double inflow = next.bus_bits - std::max(q.bus_bits - n * bus * tau, 0.0);
      ASSERT_LE(inflow, served * (1 + 1e-12) + 1e-9);
      ASSERT_LE(inflow, q.offload_bits * (1 + 1e-12) + 1e-9);
      t.flows.push_back(f);
      t.states.push_back(next);
      q = next;
    }
    EXPECT_TRUE(check_theorem1(t, rng.uniform(0, 1e5), rng.uniform(-5, 5)).holds) << trial;
  }
}

TEST(Queues, BusSharesProportional) {
  const int y[] = {1, 1, 0};
  const double r[] = {1.0, 3.0, 5.0};
  const auto s = bus_shares_bits(100.0, y, r, 0.1);
  EXPECT_DOUBLE_EQ(s[0], 25.0);
  EXPECT_DOUBLE_EQ(s[1], 75.0);
  EXPECT_EQ(s[2], 0.0);
  const double zero[] = {0.0, 0.0, 0.0};
  const auto e = bus_shares_bits(100.0, y, zero, 0.1);
  EXPECT_DOUBLE_EQ(e[0], 50.0);
  EXPECT_DOUBLE_EQ(e[1], 50.0);
}
