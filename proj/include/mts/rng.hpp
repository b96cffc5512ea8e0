#pragma once

#include <cstdint>
#include <random>

namespace mts {

/// Seeded generator. Independent streams for the same seed are obtained
/// by passing distinct stream ids, so adding draws to one purpose never
/// perturbs another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x6d7473u};
    engine_.seed(seq);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform integer in [0, n).
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<long>(mean)(engine_);
  }

  double exponential(double mean) {
    if (mean <= 0.0) return 0.0;
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

namespace stream {
inline constexpr std::uint64_t kTopology = 1;
inline constexpr std::uint64_t kMobility = 2;
inline constexpr std::uint64_t kDemand = 3;
}  // namespace stream

}  // namespace mts
