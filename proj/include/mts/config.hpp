#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mts {

/// Raised for unparseable documents or values violating a config invariant.
/// `key()` names the offending field when one can be identified.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct TaskType {
  double delay_limit_s = 0.02;
  double model_param = 1.0;  // filter-count proxy n_m

  bool operator==(const TaskType&) const = default;
};

enum class Baseline { None, FixedAllocation, FixedChannel, TraditionalComputing };
enum class InterferenceModel { OwnLeakage, CrossUser };
enum class ArrivalDist { Poisson, Exponential };

std::string to_string(Baseline b);
Baseline parse_baseline(std::string_view s);

/// Raw-data size distribution for a_u(t); uniform over [min, max] bytes.
struct DataSizeDist {
  double min_bytes = 2.0e3;
  double max_bytes = 20.0e3;

  double mean() const { return 0.5 * (min_bytes + max_bytes); }
  bool operator==(const DataSizeDist&) const = default;
};

struct ScenarioConfig {
  int num_sbs = 4;
  int num_users = 60;
  double area_side_m = 200.0;

  double lts_length_s = 1.0;
  double sts_length_s = 0.1;
  int sts_per_lts = 10;  // derived: lts_length_s / sts_length_s

  double bandwidth_per_sbs_hz = 10.0e6;
  double compute_per_sbs_gcps = 200.0;
  double bus_bandwidth_bps = 10.0e9;
  double transmit_power_dbm = 37.0;
  double noise_power_dbm = -100.0;
  double carrier_freq_ghz = 3.5;
  double user_speed_kmh = 3.0;
  double min_distance_m = 1.0;

  double arrival_mean = 50.0;         // units of arrival_unit_bits per STS
  double arrival_unit_bits = 8000.0;  // one kilobyte
  ArrivalDist arrival_dist = ArrivalDist::Poisson;

  double eta = 1.0e-6;
  double lyapunov_v = 1.0e4;
  double kappa_esc = 1.0e-28;

  double alg1_eps = 1.0e-3;
  int alg1_max_iters = 50;
  int alg2_max_iters = 10;
  double alg2_rel_tol = 1.0e-4;

  int num_lts = 10;
  std::vector<TaskType> task_types = {{0.020, 1.0}, {0.040, 3.0}, {0.060, 5.0}};
  Baseline baseline = Baseline::None;
  std::uint64_t seed = 42;
  DataSizeDist data_size;
  InterferenceModel interference_model = InterferenceModel::OwnLeakage;
  int feature_maps = 64;
  double complexity_unit_gc = 1.0e-6;  // gigacycles per unit of the complexity formula
  double complexity_floor_gc = 0.001;

  double tc_reference_bytes = 11.0e3;
  int tc_reference_type = 2;  // 1-based

  // Derived quantities.
  double transmit_power_w() const;
  double noise_power_w() const;
  double user_speed_mps() const { return user_speed_kmh * 1000.0 / 3600.0; }
  double arrival_mean_bits() const { return arrival_mean * arrival_unit_bits; }
  int num_task_types() const { return static_cast<int>(task_types.size()); }

  bool operator==(const ScenarioConfig&) const = default;
};

double dbm_to_watts(double dbm);

/// Parses a JSON document. Missing keys keep their defaults; an empty
/// document yields the default scenario.
ScenarioConfig load_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Checks every invariant; throws ConfigError naming the first offending key.
void validate(ScenarioConfig& cfg);

/// Canonical JSON text (sorted keys), stable across runs.
std::string to_json(const ScenarioConfig& cfg);

/// Overrides a single key from its textual value, then revalidates.
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Applies every `<prefix><KEY>` environment variable (e.g. MTS_NUM_USERS=10).
void apply_env_overrides(ScenarioConfig& cfg, std::string_view prefix = "MTS_");

/// Names accepted by set_config_value.
std::vector<std::string> config_keys();

/// FNV-1a 64-bit hash of the canonical JSON, rendered as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace mts
