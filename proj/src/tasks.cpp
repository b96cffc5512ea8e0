#include "mts/tasks.hpp"

#include <cmath>
#include <stdexcept>

namespace mts {

double complexity(double bytes, double model_param, int feature_maps) {
  if (!(bytes > 0.0)) throw std::invalid_argument("complexity: data size must be positive");
  if (feature_maps < 1) throw std::invalid_argument("complexity: feature_maps must be >= 1");
  const double n = model_param;
  const double a = bytes;
  const double N = feature_maps;
  return n * a + std::log(a / (3.0 * N)) * (n * a / N + a + n * a / 3.0);
}

ComplexityModel ComplexityModel::semantic(const ScenarioConfig& cfg) {
  ComplexityModel m;
  m.feature_maps = cfg.feature_maps;
  m.unit_gc = cfg.complexity_unit_gc;
  m.floor_gc = cfg.complexity_floor_gc;
  return m;
}

ComplexityModel ComplexityModel::traditional(const ScenarioConfig& cfg) {
  ComplexityModel m = semantic(cfg);
  const double n_ref = cfg.task_types.at(cfg.tc_reference_type - 1).model_param;
  const double ref_gc = m.gigacycles(cfg.tc_reference_bytes, n_ref);
  m.linear_gc_per_byte = ref_gc / cfg.tc_reference_bytes;
  return m;
}

ComplexityModel::Result ComplexityModel::evaluate(double bytes, double model_param) const {
  if (!(bytes > 0.0)) return {0.0, false};
  if (linear_gc_per_byte > 0.0) return {linear_gc_per_byte * bytes, false};
  const double gc = complexity(bytes, model_param, feature_maps) * unit_gc;
  if (gc <= floor_gc) return {floor_gc, true};
  return {gc, false};
}

double required_compute(std::span<const int> z_row, double bytes, std::span<const TaskType> types,
                        const ComplexityModel& model) {
  if (z_row.size() != types.size()) {
    throw std::invalid_argument("required_compute: indicator length must match task catalog");
  }
  int ones = 0;
  double total = 0.0;
  for (std::size_t m = 0; m < z_row.size(); ++m) {
    if (z_row[m] != 0 && z_row[m] != 1) {
      throw std::invalid_argument("required_compute: indicator entries must be 0/1");
    }
    if (z_row[m] == 1) {
      ++ones;
      total += model.gigacycles(bytes, types[m].model_param);
    }
  }
  if (ones != 1) throw std::invalid_argument("required_compute: indicator row must be one-hot");
  return total;
}

std::vector<int> StsDemand::indicator(std::size_t u, int num_types) const {
  std::vector<int> z(num_types, 0);
  z.at(task_type.at(u)) = 1;
  return z;
}

std::vector<double> sample_arrivals(Rng& rng, double mean_units, int num_users, ArrivalDist dist,
                                    double unit_bits) {
  std::vector<double> out(num_users, 0.0);
  for (auto& a : out) {
    if (dist == ArrivalDist::Poisson) {
      a = static_cast<double>(rng.poisson(mean_units)) * unit_bits;
    } else {
      a = rng.exponential(mean_units * unit_bits);
    }
  }
  return out;
}

int sample_task_request(Rng& rng, int num_types) {
  if (num_types < 1) throw std::invalid_argument("sample_task_request: need at least one type");
  return rng.index(num_types);
}

StsDemand draw_demand(Rng& rng, const ScenarioConfig& cfg) {
  const int U = cfg.num_users;
  StsDemand d;
  d.raw_bytes.resize(U);
  d.task_type.resize(U);
  for (int u = 0; u < U; ++u) {
    d.raw_bytes[u] = rng.uniform(cfg.data_size.min_bytes, cfg.data_size.max_bytes);
  }
  for (int u = 0; u < U; ++u) d.task_type[u] = sample_task_request(rng, cfg.num_task_types());
  d.arrivals_bits =
      sample_arrivals(rng, cfg.arrival_mean, U, cfg.arrival_dist, cfg.arrival_unit_bits);
  return d;
}

}  // namespace mts
