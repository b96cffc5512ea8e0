#include "mts/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern char** environ;

namespace mts {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const char* to_string(InterferenceModel m) {
  return m == InterferenceModel::OwnLeakage ? "own_leakage" : "cross_user";
}

const char* to_string(ArrivalDist d) {
  return d == ArrivalDist::Poisson ? "poisson" : "exponential";
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("wrong type: ") + e.what());
  }
}

json to_json_object(const ScenarioConfig& c) {
  json tasks = json::array();
  for (const auto& t : c.task_types) {
    tasks.push_back({{"delay_ms", t.delay_limit_s * 1000.0}, {"n_m", t.model_param}});
  }
  return json{
      {"num_sbs", c.num_sbs},
      {"num_users", c.num_users},
      {"area_side_m", c.area_side_m},
      {"lts_length_s", c.lts_length_s},
      {"sts_length_s", c.sts_length_s},
      {"bandwidth_per_sbs_hz", c.bandwidth_per_sbs_hz},
      {"compute_per_sbs_gcps", c.compute_per_sbs_gcps},
      {"bus_bandwidth_bps", c.bus_bandwidth_bps},
      {"transmit_power_dbm", c.transmit_power_dbm},
      {"noise_power_dbm", c.noise_power_dbm},
      {"carrier_freq_ghz", c.carrier_freq_ghz},
      {"user_speed_kmh", c.user_speed_kmh},
      {"min_distance_m", c.min_distance_m},
      {"arrival_mean", c.arrival_mean},
      {"arrival_unit_bits", c.arrival_unit_bits},
      {"arrival_dist", to_string(c.arrival_dist)},
      {"eta", c.eta},
      {"lyapunov_v", c.lyapunov_v},
      {"kappa_esc", c.kappa_esc},
      {"alg1_eps", c.alg1_eps},
      {"alg1_max_iters", c.alg1_max_iters},
      {"alg2_max_iters", c.alg2_max_iters},
      {"alg2_rel_tol", c.alg2_rel_tol},
      {"num_lts", c.num_lts},
      {"task_types", tasks},
      {"baseline", to_string(c.baseline)},
      {"seed", c.seed},
      {"data_size_dist",
       {{"kind", "uniform"}, {"min_kb", c.data_size.min_bytes / 1000.0},
        {"max_kb", c.data_size.max_bytes / 1000.0}}},
      {"interference_model", to_string(c.interference_model)},
      {"feature_maps", c.feature_maps},
      {"complexity_unit_gc", c.complexity_unit_gc},
      {"complexity_floor_gc", c.complexity_floor_gc},
      {"tc_reference_kb", c.tc_reference_bytes / 1000.0},
      {"tc_reference_type", c.tc_reference_type},
  };
}

ScenarioConfig from_json_object(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config document must be a JSON object");
  const json defaults = to_json_object(ScenarioConfig{});
  for (const auto& [key, _] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError(key, "unknown config key");
  }

  ScenarioConfig c;
  read(j, "num_sbs", c.num_sbs);
  read(j, "num_users", c.num_users);
  read(j, "area_side_m", c.area_side_m);
  read(j, "lts_length_s", c.lts_length_s);
  read(j, "sts_length_s", c.sts_length_s);
  read(j, "bandwidth_per_sbs_hz", c.bandwidth_per_sbs_hz);
  read(j, "compute_per_sbs_gcps", c.compute_per_sbs_gcps);
  read(j, "bus_bandwidth_bps", c.bus_bandwidth_bps);
  read(j, "transmit_power_dbm", c.transmit_power_dbm);
  read(j, "noise_power_dbm", c.noise_power_dbm);
  read(j, "carrier_freq_ghz", c.carrier_freq_ghz);
  read(j, "user_speed_kmh", c.user_speed_kmh);
  read(j, "min_distance_m", c.min_distance_m);
  read(j, "arrival_mean", c.arrival_mean);
  read(j, "arrival_unit_bits", c.arrival_unit_bits);
  read(j, "eta", c.eta);
  read(j, "lyapunov_v", c.lyapunov_v);
  read(j, "kappa_esc", c.kappa_esc);
  read(j, "alg1_eps", c.alg1_eps);
  read(j, "alg1_max_iters", c.alg1_max_iters);
  read(j, "alg2_max_iters", c.alg2_max_iters);
  read(j, "alg2_rel_tol", c.alg2_rel_tol);
  read(j, "num_lts", c.num_lts);
  read(j, "seed", c.seed);
  read(j, "feature_maps", c.feature_maps);
  read(j, "complexity_unit_gc", c.complexity_unit_gc);
  read(j, "complexity_floor_gc", c.complexity_floor_gc);
  read(j, "tc_reference_type", c.tc_reference_type);

  if (j.contains("tc_reference_kb")) {
    double kb = 0.0;
    read(j, "tc_reference_kb", kb);
    c.tc_reference_bytes = kb * 1000.0;
  }

  if (j.contains("arrival_dist")) {
    std::string s;
    read(j, "arrival_dist", s);
    s = lower(s);
    if (s == "poisson") c.arrival_dist = ArrivalDist::Poisson;
    else if (s == "exponential") c.arrival_dist = ArrivalDist::Exponential;
    else throw ConfigError("arrival_dist", "expected poisson|exponential, got '" + s + "'");
  }
  if (j.contains("interference_model")) {
    std::string s;
    read(j, "interference_model", s);
    s = lower(s);
    if (s == "own_leakage") c.interference_model = InterferenceModel::OwnLeakage;
    else if (s == "cross_user") c.interference_model = InterferenceModel::CrossUser;
    else throw ConfigError("interference_model", "expected own_leakage|cross_user, got '" + s + "'");
  }
  if (j.contains("baseline")) {
    std::string s;
    read(j, "baseline", s);
    try {
      c.baseline = parse_baseline(s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("baseline", e.what());
    }
  }
  if (j.contains("data_size_dist")) {
    const json& d = j["data_size_dist"];
    if (!d.is_object()) throw ConfigError("data_size_dist", "expected an object");
    std::string kind = "uniform";
    read(d, "kind", kind);
    if (lower(kind) != "uniform") throw ConfigError("data_size_dist", "only 'uniform' is supported");
    double lo = c.data_size.min_bytes / 1000.0, hi = c.data_size.max_bytes / 1000.0;
    read(d, "min_kb", lo);
    read(d, "max_kb", hi);
    c.data_size = {lo * 1000.0, hi * 1000.0};
  }
  if (j.contains("task_types")) {
    const json& tt = j["task_types"];
    if (!tt.is_array()) throw ConfigError("task_types", "expected a list of {delay_ms, n_m}");
    c.task_types.clear();
    for (const auto& e : tt) {
      if (!e.is_object() || !e.contains("delay_ms") || !e.contains("n_m")) {
        throw ConfigError("task_types", "each entry needs delay_ms and n_m");
      }
      c.task_types.push_back({e["delay_ms"].get<double>() / 1000.0, e["n_m"].get<double>()});
    }
  }
  validate(c);
  return c;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string to_string(Baseline b) {
  switch (b) {
    case Baseline::None: return "none";
    case Baseline::FixedAllocation: return "FA";
    case Baseline::FixedChannel: return "FC";
    case Baseline::TraditionalComputing: return "TC";
  }
  return "none";
}

Baseline parse_baseline(std::string_view s) {
  const std::string l = lower(s);
  if (l == "none" || l == "proposed") return Baseline::None;
  if (l == "fa") return Baseline::FixedAllocation;
  if (l == "fc") return Baseline::FixedChannel;
  if (l == "tc") return Baseline::TraditionalComputing;
  throw std::invalid_argument("unknown baseline '" + std::string(s) + "' (expected none|FA|FC|TC)");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double ScenarioConfig::transmit_power_w() const { return dbm_to_watts(transmit_power_dbm); }
double ScenarioConfig::noise_power_w() const { return dbm_to_watts(noise_power_dbm); }

void validate(ScenarioConfig& c) {
  require(c.num_sbs >= 1, "num_sbs", "must be >= 1");
  require(c.num_users >= 0, "num_users", "must be >= 0");
  require(positive_finite(c.area_side_m), "area_side_m", "must be positive");
  require(positive_finite(c.lts_length_s), "lts_length_s", "must be positive");
  require(positive_finite(c.sts_length_s), "sts_length_s", "must be positive");

  const double ratio = c.lts_length_s / c.sts_length_s;
  const double p = std::round(ratio);
  if (p < 1.0 || std::abs(p * c.sts_length_s - c.lts_length_s) > 1e-9 * c.lts_length_s) {
    std::ostringstream msg;
    msg << "T = p*tau violated: lts_length_s=" << c.lts_length_s
        << " is not a positive integer multiple of sts_length_s=" << c.sts_length_s;
    throw ConfigError("lts_length_s", msg.str());
  }
  c.sts_per_lts = static_cast<int>(p);

  require(positive_finite(c.bandwidth_per_sbs_hz), "bandwidth_per_sbs_hz", "must be positive");
  require(positive_finite(c.compute_per_sbs_gcps), "compute_per_sbs_gcps", "must be positive");
  require(positive_finite(c.bus_bandwidth_bps), "bus_bandwidth_bps", "must be positive");
  require(std::isfinite(c.transmit_power_dbm), "transmit_power_dbm", "must be finite");
  require(std::isfinite(c.noise_power_dbm), "noise_power_dbm", "must be finite");
  require(positive_finite(c.carrier_freq_ghz), "carrier_freq_ghz", "must be positive");
  require(std::isfinite(c.user_speed_kmh) && c.user_speed_kmh >= 0.0, "user_speed_kmh",
          "must be >= 0");
  require(positive_finite(c.min_distance_m), "min_distance_m", "must be positive");
  require(std::isfinite(c.arrival_mean) && c.arrival_mean >= 0.0, "arrival_mean", "must be >= 0");
  require(positive_finite(c.arrival_unit_bits), "arrival_unit_bits", "must be positive");
  require(std::isfinite(c.eta) && c.eta >= 0.0, "eta", "must be >= 0");
  require(positive_finite(c.lyapunov_v), "lyapunov_v", "must be positive");
  require(positive_finite(c.kappa_esc), "kappa_esc", "must be positive");
  require(c.alg1_eps > 0.0, "alg1_eps", "must be positive");
  require(c.alg1_max_iters >= 1, "alg1_max_iters", "must be >= 1");
  require(c.alg2_max_iters >= 1, "alg2_max_iters", "must be >= 1");
  require(c.alg2_rel_tol >= 0.0, "alg2_rel_tol", "must be >= 0");
  require(c.num_lts >= 0, "num_lts", "must be >= 0");
  require(!c.task_types.empty(), "task_types", "at least one task type is required");
  for (const auto& t : c.task_types) {
    require(positive_finite(t.delay_limit_s), "task_types", "delay limits must be positive");
    require(std::isfinite(t.model_param) && t.model_param >= 1.0, "task_types", "n_m must be >= 1");
  }
  require(positive_finite(c.data_size.min_bytes), "data_size_dist", "min_kb must be positive");
  require(std::isfinite(c.data_size.max_bytes) && c.data_size.max_bytes >= c.data_size.min_bytes,
          "data_size_dist", "max_kb must be >= min_kb");
  require(c.feature_maps >= 1, "feature_maps", "must be >= 1");
  require(positive_finite(c.complexity_unit_gc), "complexity_unit_gc", "must be positive");
  require(positive_finite(c.complexity_floor_gc), "complexity_floor_gc", "must be positive");
  require(positive_finite(c.tc_reference_bytes), "tc_reference_kb", "must be positive");
  require(c.tc_reference_type >= 1 && c.tc_reference_type <= c.num_task_types(),
          "tc_reference_type", "must index an existing task type (1-based)");
}

ScenarioConfig load_config(std::string_view text) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](unsigned char ch) { return std::isspace(ch); });
  if (blank) {
    ScenarioConfig c;
    validate(c);
    return c;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config parse failure: ") + e.what());
  }
  return from_json_object(j);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string to_json(const ScenarioConfig& cfg) { return to_json_object(cfg).dump(); }

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  json j = to_json_object(cfg);
  const std::string k(key);
  if (!j.contains(k)) throw ConfigError(k, "unknown config key");
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = std::string(value);
  }
  j[k] = v;
  cfg = from_json_object(j);
}

void apply_env_overrides(ScenarioConfig& cfg, std::string_view prefix) {
  for (char** env = environ; env && *env; ++env) {
    std::string_view entry(*env);
    if (entry.substr(0, prefix.size()) != prefix) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key = lower(entry.substr(prefix.size(), eq - prefix.size()));
    const auto keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) continue;
    set_config_value(cfg, key, entry.substr(eq + 1));
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  const auto obj = to_json_object(ScenarioConfig{});
  for (const auto& [k, _] : obj.items()) keys.push_back(k);
  return keys;
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json(cfg)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mts
