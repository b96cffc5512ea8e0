// mts: run, compare, sweep and selftest front end.

#include "mts/config.hpp"
#include "mts/engine.hpp"
#include "mts/metrics.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace mts;

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kBadConfig = 3, kIoError = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioConfig load(const std::string& path) {
  ScenarioConfig cfg = path.empty() ? load_config("") : load_config_file(path);
  apply_env_overrides(cfg);
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string axis_key(const std::string& axis) {
  static const std::map<std::string, std::string> alias = {
      {"V", "lyapunov_v"}, {"v", "lyapunov_v"}, {"U", "num_users"}, {"u", "num_users"},
      {"F_k", "compute_per_sbs_gcps"}, {"Fk", "compute_per_sbs_gcps"}, {"K", "num_sbs"}};
  const auto it = alias.find(axis);
  const std::string key = it == alias.end() ? axis : it->second;
  const auto keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(axis, "sweep axis must name a configuration key");
  }
  return key;
}

struct Job {
  ScenarioConfig cfg;
  fs::path dir;
  std::string label;
};

struct JobResult {
  RunResult result;
  std::string hash;
};

/// Runs every job, at most `jobs` at a time. Each run writes only its own directory.
std::vector<JobResult> run_jobs(const std::vector<Job>& work, int jobs, MetricsFormat fmt) {
  std::vector<JobResult> out(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        out[i].result = run(work[i].cfg);
        out[i].hash = config_hash(work[i].cfg);
        emit_metrics(out[i].result, work[i].cfg, fmt, work[i].dir);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (first_error.empty()) first_error = work[i].label + ": " + e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw IoError(first_error);
  return out;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + p.string() + " for writing");
  return os;
}

double mean_type(const RunResult& r, int m) {
  double s = 0.0;
  for (const auto& l : r.lts) s += l.admitted_per_type[m];
  return r.lts.empty() ? 0.0 : s / r.lts.size();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-time-scale admission and resource allocation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MTS_VERSION);

  std::string config_path, out_dir = "out", format = "csv", baselines, axis, values, fault;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int seeds = 10, jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string baseline = "none";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON scenario file (defaults when omitted)")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { seed = s; seed_given = true; },
                                            "Seed (first seed for multi-seed commands)");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--format", format, "Metrics format")->check(CLI::IsMember({"csv", "jsonl"}));
  };

  auto* run_cmd = app.add_subcommand("run", "Single simulation");
  add_common(run_cmd);
  run_cmd->add_option("--baseline", baseline, "none|FA|FC|TC");

  auto* cmp_cmd = app.add_subcommand("compare", "Proposed algorithm and baselines on paired seeds");
  add_common(cmp_cmd);
  cmp_cmd->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--baselines", baselines, "Comma list of FA,FC,TC")->default_str("FA,FC,TC");
  cmp_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "One run per (value, seed) along a parameter axis");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "eta, V, U, F_k or any config key")->required();
  sweep_cmd->add_option("--values", values, "Comma list of values")->required();
  sweep_cmd->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--baselines", baselines, "Also sweep these baselines (comma list)");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* self_cmd = app.add_subcommand("selftest", "Brute-force oracle suites");
  self_cmd->add_option("--inject-fault", fault, "Corrupt one solver: compute|bandwidth|association|admission");
  self_cmd->add_option("--seed", seed, "Instance seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (self_cmd->parsed()) {
      const auto results = selftest::run_all(selftest::parse_fault(fault), seed_given || seed ? seed : 2024);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%-4s %-12s instances=%d failed_checks=%d worst=%.3g time=%.2fs%s%s\n",
                    r.passed() ? "PASS" : "FAIL", r.name.c_str(), r.instances, r.failures, r.worst_error,
                    r.seconds, r.first_failure.empty() ? "" : "  first: ", r.first_failure.c_str());
        ok = ok && r.passed();
      }
      return ok ? kOk : kFailed;
    }

    ScenarioConfig base = load(config_path);
    if (seed_given) base.seed = seed;
    const auto fmt = parse_format(format);

    if (run_cmd->parsed()) {
      base.baseline = parse_baseline(baseline);
      const auto result = run(base);
      emit_metrics(result, base, fmt, out_dir);
      std::printf("mean utility %.6g  revenue %.6g  cost %.6g  admitted %.3g  violations %d\n",
                  result.mean_utility(), result.mean_revenue(), result.mean_cost(), result.mean_admitted(),
                  result.total_violations());
      return kOk;
    }

    std::vector<Baseline> strategies = {Baseline::None};
    const std::string list = cmp_cmd->parsed() && baselines.empty() ? "FA,FC,TC" : baselines;
    for (const auto& b : split_list(list)) strategies.push_back(parse_baseline(b));

    if (cmp_cmd->parsed()) {
      std::vector<Job> work;
      for (auto b : strategies) {
        for (int s = 0; s < seeds; ++s) {
          Job j;
          j.cfg = base;
          j.cfg.baseline = b;
          j.cfg.seed = base.seed + s;
          j.label = to_string(b) + "/seed_" + std::to_string(j.cfg.seed);
          j.dir = fs::path(out_dir) / to_string(b) / ("seed_" + std::to_string(j.cfg.seed));
          work.push_back(std::move(j));
        }
      }
      const auto res = run_jobs(work, jobs, fmt);

      auto os = open_out(fs::path(out_dir) / "summary.csv");
      os << "strategy,seed,config_hash,mean_utility,mean_revenue,mean_cost,mean_admitted,violation_rate";
      for (int m = 1; m <= base.num_task_types(); ++m) os << ",admitted_type" << m;
      os << '\n';
      std::map<std::string, std::vector<const RunResult*>> by;
      for (std::size_t i = 0; i < work.size(); ++i) {
        const auto& r = res[i].result;
        const std::string name = to_string(work[i].cfg.baseline);
        by[name].push_back(&r);
        os << name << ',' << work[i].cfg.seed << ',' << res[i].hash << ',' << format_double(r.mean_utility())
           << ',' << format_double(r.mean_revenue()) << ',' << format_double(r.mean_cost()) << ','
           << format_double(r.mean_admitted()) << ',' << format_double(r.violation_rate());
        for (int m = 0; m < base.num_task_types(); ++m) os << ',' << format_double(mean_type(r, m));
        os << '\n';
      }
      std::printf("%-9s %12s %10s %12s %10s %10s", "strategy", "mean_G", "revenue", "cost", "admitted", "viol_rate");
      for (int m = 1; m <= base.num_task_types(); ++m) std::printf("  type%d", m);
      std::printf("\n");
      for (auto b : strategies) {
        const auto& runs = by[to_string(b)];
        double g = 0, gl = 0, gs = 0, a = 0, v = 0;
        std::vector<double> types(base.num_task_types(), 0.0);
        for (const auto* r : runs) {
          g += r->mean_utility();
          gl += r->mean_revenue();
          gs += r->mean_cost();
          a += r->mean_admitted();
          v += r->violation_rate();
          for (int m = 0; m < base.num_task_types(); ++m) types[m] += mean_type(*r, m);
        }
        const double n = static_cast<double>(runs.size());
        std::printf("%-9s %12.5g %10.5g %12.5g %10.4g %10.4g", to_string(b).c_str(), g / n, gl / n, gs / n, a / n,
                    v / n);
        for (double t : types) std::printf("  %5.2f", t / n);
        std::printf("\n");
      }
      return kOk;
    }

    if (sweep_cmd->parsed()) {
      const std::string key = axis_key(axis);
      const auto vals = split_list(values);
      if (vals.empty()) throw ConfigError(axis, "sweep needs at least one value");
      std::vector<Job> work;
      for (const auto& v : vals) {
        for (auto b : strategies) {
          for (int s = 0; s < seeds; ++s) {
            Job j;
            j.cfg = base;
            set_config_value(j.cfg, key, v);
            j.cfg.baseline = b;
            j.cfg.seed = base.seed + s;
            j.label = key + "=" + v + "/" + to_string(b) + "/seed_" + std::to_string(j.cfg.seed);
            j.dir = fs::path(out_dir) / "runs" / (key + "=" + v) / to_string(b) /
                    ("seed_" + std::to_string(j.cfg.seed));
            work.push_back(std::move(j));
          }
        }
      }
      const auto res = run_jobs(work, jobs, fmt);
      auto os = open_out(fs::path(out_dir) / "series.csv");
      os << "axis,value,strategy,seed,manifest_hash,metric,observation\n";
      for (std::size_t i = 0; i < work.size(); ++i) {
        const auto& r = res[i].result;
        const auto& c = work[i].cfg;
        const std::string prefix = key + ',' + vals[i / (strategies.size() * seeds)] + ',' + to_string(c.baseline) +
                                   ',' + std::to_string(c.seed) + ',' + res[i].hash + ',';
        const std::pair<const char*, double> metrics[] = {
            {"mean_utility", r.mean_utility()}, {"mean_revenue", r.mean_revenue()},
            {"mean_cost", r.mean_cost()},       {"mean_admitted", r.mean_admitted()},
            {"violation_rate", r.violation_rate()}};
        for (const auto& [name, value] : metrics) os << prefix << name << ',' << format_double(value) << '\n';
      }
      std::printf("%zu runs written to %s\n", work.size(), (fs::path(out_dir) / "series.csv").c_str());
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kBadConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIoError;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "bad argument: %s\n", e.what());
    return kBadConfig;
  }
  return kOk;
}
