#include "mts/tasks.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace mts;

namespace {

constexpr int kN = 64;

ComplexityModel raw_units() {
  ComplexityModel m;
  m.feature_maps = kN;
  m.unit_gc = 1.0;
  m.floor_gc = 0.0;
  return m;
}

const std::vector<TaskType> kTypes = {{0.020, 1.0}, {0.040, 3.0}, {0.060, 5.0}};

}  // namespace

TEST(Tasks, LogTermVanishesAtThreeN) {
  for (double n : {1.0, 3.0, 5.0, 7.5}) EXPECT_NEAR(complexity(3 * kN, n, kN), n * 3 * kN, 1e-12);
}

TEST(Tasks, ComplexityAtThreeNe) {
  // a = 3N e = 521.91, so n a + (n a / N + a + n a / 3) = 1225.945
  EXPECT_NEAR(complexity(3 * kN * std::exp(1.0), 1.0, kN), 1225.9451046350293, 1e-9);
  const double a = 3 * kN * std::exp(1.0);
  EXPECT_NEAR(complexity(a, 1.0, kN), a + (a / kN + a + a / 3), 1e-9);
}

TEST(Tasks, ComplexityMonotoneInFilterCount) {
  const double a = 10 * 3 * kN;
  EXPECT_GT(complexity(a, 5.0, kN), complexity(a, 1.0, kN));
}

TEST(Tasks, ComplexityIncreasingAboveThreeN) {
  for (double a = 3 * kN; a < 3e5; a *= 1.05) {
    ASSERT_GT(complexity(a * 1.001, 3.0, kN), complexity(a, 3.0, kN)) << a;
  }
}

TEST(Tasks, ComplexityIncreasingInN) {
  for (double a = 3 * kN * 1.01; a < 3e5; a *= 1.3) {
    for (double n = 1.0; n < 8.0; n += 0.5) {
      ASSERT_GT(complexity(a, n + 0.01, kN), complexity(a, n, kN)) << a << ' ' << n;
    }
  }
}

TEST(Tasks, RequiredComputeOneHot) {
  const auto m = raw_units();
  const int t1[] = {1, 0, 0};
  const int t3[] = {0, 0, 1};
  EXPECT_NEAR(required_compute(t1, 3 * kN, kTypes, m), 3 * kN, 1e-12);
  EXPECT_NEAR(required_compute(t3, 3 * kN, kTypes, m), 15 * kN, 1e-12);
}

TEST(Tasks, RequiredComputeMatchesDirectCall) {
  Rng rng(8);
  ScenarioConfig cfg;
  const auto m = ComplexityModel::semantic(cfg);
  for (int i = 0; i < 300; ++i) {
    const double a = rng.uniform(0, 5e5);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> z(3, 0);
      z[t] = 1;
      EXPECT_EQ(required_compute(z, a, kTypes, m), m.gigacycles(a, kTypes[t].model_param));
    }
  }
}

TEST(Tasks, ClampAndZero) {
  ScenarioConfig cfg;
  const auto m = ComplexityModel::semantic(cfg);
  EXPECT_EQ(m.gigacycles(0.0, 3.0), 0.0);
  const auto tiny = m.evaluate(10.0, 1.0);
  EXPECT_TRUE(tiny.clamped);
  EXPECT_EQ(tiny.gigacycles, cfg.complexity_floor_gc);
}

TEST(Tasks, TraditionalCalibration) {
  ScenarioConfig cfg;
  const auto sem = ComplexityModel::semantic(cfg);
  const auto tc = ComplexityModel::traditional(cfg);
  const double n_ref = cfg.task_types[cfg.tc_reference_type - 1].model_param;
  EXPECT_NEAR(tc.gigacycles(cfg.tc_reference_bytes, n_ref), sem.gigacycles(cfg.tc_reference_bytes, n_ref),
              1e-12);
  EXPECT_GT(std::abs(tc.gigacycles(3 * cfg.tc_reference_bytes, n_ref) -
                     sem.gigacycles(3 * cfg.tc_reference_bytes, n_ref)),
            1e-6);
}

TEST(Tasks, ZeroArrivalMean) {
  Rng rng(1);
  for (double a : sample_arrivals(rng, 0.0, 20)) EXPECT_EQ(a, 0.0);
}

TEST(Tasks, ArrivalMeanConverges) {
  for (auto dist : {ArrivalDist::Poisson, ArrivalDist::Exponential}) {
    Rng rng(2);
    const auto a = sample_arrivals(rng, 50.0, 100000, dist, 1.0);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    EXPECT_NEAR(mean, 50.0, 0.5);
  }
}

TEST(Tasks, ArrivalsDeterministic) {
  Rng a(3), b(3);
  EXPECT_EQ(sample_arrivals(a, 50.0, 60), sample_arrivals(b, 50.0, 60));
}

TEST(Tasks, SingleTypeAlwaysFirst) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_task_request(rng, 1), 0);
}

TEST(Tasks, TypeFrequenciesUniform) {
  Rng rng(5);
  std::vector<int> count(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++count[sample_task_request(rng, 3)];
  for (int c : count) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.02);
}

TEST(Tasks, TypeSequenceDeterministic) {
  Rng a(6), b(6);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(sample_task_request(a, 3), sample_task_request(b, 3));
}

TEST(Tasks, DemandShapes) {
  ScenarioConfig cfg;
  Rng rng(7, stream::kDemand);
  const auto d = draw_demand(rng, cfg);
  ASSERT_EQ(d.num_users(), 60u);
  ASSERT_EQ(d.task_type.size(), 60u);
  ASSERT_EQ(d.arrivals_bits.size(), 60u);
  for (std::size_t u = 0; u < 60; ++u) {
    EXPECT_GE(d.raw_bytes[u], cfg.data_size.min_bytes);
    EXPECT_LE(d.raw_bytes[u], cfg.data_size.max_bytes);
    const auto z = d.indicator(u, 3);
    EXPECT_EQ(std::accumulate(z.begin(), z.end(), 0), 1);
    EXPECT_EQ(z[d.task_type[u]], 1);
  }
}
