#pragma once

#include "mts/config.hpp"
#include "mts/rng.hpp"

#include <span>
#include <vector>

namespace mts {

/// CNN semantic-extraction work for `bytes` of raw data:
///   n*a + ln(a/(3N)) * (n*a/N + a + n*a/3)
/// in formula units (multiply by complexity_unit_gc for gigacycles).
/// Negative for a < 3N*e^{-...}; callers clamp via `ComplexityModel`.
double complexity(double bytes, double model_param, int feature_maps);

/// Work model used for planning and queue dynamics, in gigacycles.
struct ComplexityModel {
  int feature_maps = 64;
  double unit_gc = 1.0e-6;
  double floor_gc = 0.001;
  // When positive, replaces the CNN model by a linear one: gigacycles = linear_gc_per_byte * a.
  double linear_gc_per_byte = 0.0;

  static ComplexityModel semantic(const ScenarioConfig& cfg);
  /// Linear model calibrated to match the semantic one at the config's reference size and type.
  static ComplexityModel traditional(const ScenarioConfig& cfg);

  struct Result {
    double gigacycles = 0.0;
    bool clamped = false;
  };

  /// Work for one task. Zero bytes cost nothing; nonpositive model output is clamped up to floor_gc.
  Result evaluate(double bytes, double model_param) const;
  double gigacycles(double bytes, double model_param) const { return evaluate(bytes, model_param).gigacycles; }
};

/// Sum over task types of z_um * F_um(a); z_row must be one-hot.
double required_compute(std::span<const int> z_row, double bytes, std::span<const TaskType> types,
                        const ComplexityModel& model);

/// Demand of one STS for every user.
struct StsDemand {
  std::vector<double> raw_bytes;   // a_u
  std::vector<int> task_type;      // index into the task catalog (one-hot z row)
  std::vector<double> arrivals_bits;  // A_u

  std::size_t num_users() const { return raw_bytes.size(); }
  double raw_bits(std::size_t u) const { return 8.0 * raw_bytes[u]; }
  /// One-hot z row for user u.
  std::vector<int> indicator(std::size_t u, int num_types) const;
};

/// i.i.d. arrivals in bits with mean `mean_units * unit_bits`: a Poisson
/// count of unit payloads, or an exponential amount.
std::vector<double> sample_arrivals(Rng& rng, double mean_units, int num_users,
                                    ArrivalDist dist = ArrivalDist::Poisson,
                                    double unit_bits = 8000.0);

/// Uniform draw over `num_types` task types.
int sample_task_request(Rng& rng, int num_types);

StsDemand draw_demand(Rng& rng, const ScenarioConfig& cfg);

}  // namespace mts
