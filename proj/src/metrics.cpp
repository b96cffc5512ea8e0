#include "mts/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef MTS_VERSION
#define MTS_VERSION "dev"
#endif

namespace mts {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_double(v[i]);
  }
  return s;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& tok : split(s, ';')) out.push_back(std::stod(tok));
  return out;
}

std::string bits(const std::vector<int>& y) {
  std::string s;
  for (int b : y) s += b ? '1' : '0';
  return s;
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> y;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::runtime_error("bad admission bitstring: " + s);
    y.push_back(c == '1');
  }
  return y;
}

std::vector<std::string> lts_fields(const LtsRecord& r) {
  std::vector<std::string> f = {std::to_string(r.lts_index), bits(r.y)};
  for (double c : r.admitted_per_type) f.push_back(format_double(c));
  for (double x : {r.revenue, r.cost, r.utility, r.average_utility, r.eta}) f.push_back(format_double(x));
  f.push_back(std::to_string(r.alg2_iterations));
  const auto& d = r.drift;
  for (double x : {d.lyapunov_start, d.lyapunov_end, d.drift, d.penalty, d.bound_constant, d.lhs,
                   d.bound_rhs}) {
    f.push_back(format_double(x));
  }
  f.push_back(d.holds ? "1" : "0");
  return f;
}

std::vector<std::string> sts_fields(const StsRecord& r) {
  return {std::to_string(r.lts_index),
          std::to_string(r.sts_index),
          format_double(r.queues.offload_bits),
          format_double(r.queues.bus_bits),
          format_double(r.queues.processing_gc),
          format_double(r.power_w),
          format_double(r.objective),
          std::to_string(r.alg1_iterations),
          std::to_string(r.alg1_converged),
          std::to_string(r.violations),
          join_doubles(r.rates_bps)};
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

// Columns holding strings rather than numbers in JSONL.
bool is_text_column(const std::string& name) { return name == "y" || name == "rates_bps"; }

void write_jsonl_row(std::ostream& os, const std::vector<std::string>& cols,
                     const std::vector<std::string>& fields) {
  os << '{';
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << '"' << cols[i] << "\":";
    if (is_text_column(cols[i])) os << '"' << fields[i] << '"';
    else os << fields[i];
  }
  os << "}\n";
}

std::vector<std::string> read_header(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(std::string(what) + ": missing header");
  return split(line, ',');
}

}  // namespace

MetricsFormat parse_format(std::string_view s) {
  if (s == "csv") return MetricsFormat::Csv;
  if (s == "jsonl") return MetricsFormat::Jsonl;
  throw std::invalid_argument("unknown metrics format: " + std::string(s));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> lts_columns(int num_task_types) {
  std::vector<std::string> c = {"lts", "y"};
  for (int m = 1; m <= num_task_types; ++m) c.push_back("admitted_type" + std::to_string(m));
  for (const char* n : {"revenue", "cost", "utility", "avg_utility", "eta", "alg2_iterations",
                        "lyapunov_start", "lyapunov_end", "drift", "penalty", "bound_constant",
                        "lhs", "bound_rhs", "theorem1_holds"}) {
    c.push_back(n);
  }
  return c;
}

std::vector<std::string> sts_columns() {
  return {"lts",       "sts",       "offload_bits",    "bus_bits",       "processing_gc",
          "power_w",   "objective", "alg1_iterations", "alg1_converged", "violations",
          "rates_bps"};
}

void write_lts_csv(std::ostream& os, const std::vector<LtsRecord>& records, int num_task_types) {
  write_csv_row(os, lts_columns(num_task_types));
  for (const auto& r : records) write_csv_row(os, lts_fields(r));
}

void write_sts_csv(std::ostream& os, const std::vector<StsRecord>& records) {
  write_csv_row(os, sts_columns());
  for (const auto& r : records) write_csv_row(os, sts_fields(r));
}

void write_lts_jsonl(std::ostream& os, const std::vector<LtsRecord>& records, int num_task_types) {
  const auto cols = lts_columns(num_task_types);
  for (const auto& r : records) write_jsonl_row(os, cols, lts_fields(r));
}

void write_sts_jsonl(std::ostream& os, const std::vector<StsRecord>& records) {
  const auto cols = sts_columns();
  for (const auto& r : records) write_jsonl_row(os, cols, sts_fields(r));
}

std::vector<LtsRecord> read_lts_csv(std::istream& is) {
  const auto header = read_header(is, "lts csv");
  int types = 0;
  for (const auto& h : header) types += h.rfind("admitted_type", 0) == 0 ? 1 : 0;
  if (header != lts_columns(types)) throw std::runtime_error("lts csv: unexpected columns");

  std::vector<LtsRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw std::runtime_error("lts csv: ragged row");
    std::size_t i = 0;
    LtsRecord r;
    r.lts_index = std::stoi(f[i++]);
    r.y = parse_bits(f[i++]);
    for (int m = 0; m < types; ++m) r.admitted_per_type.push_back(std::stod(f[i++]));
    r.revenue = std::stod(f[i++]);
    r.cost = std::stod(f[i++]);
    r.utility = std::stod(f[i++]);
    r.average_utility = std::stod(f[i++]);
    r.eta = std::stod(f[i++]);
    r.alg2_iterations = std::stoi(f[i++]);
    auto& d = r.drift;
    d.lts_index = r.lts_index;
    d.lyapunov_start = std::stod(f[i++]);
    d.lyapunov_end = std::stod(f[i++]);
    d.drift = std::stod(f[i++]);
    d.penalty = std::stod(f[i++]);
    d.bound_constant = std::stod(f[i++]);
    d.lhs = std::stod(f[i++]);
    d.bound_rhs = std::stod(f[i++]);
    d.holds = f[i++] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<StsRecord> read_sts_csv(std::istream& is) {
  const auto header = read_header(is, "sts csv");
  if (header != sts_columns()) throw std::runtime_error("sts csv: unexpected columns");
  std::vector<StsRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw std::runtime_error("sts csv: ragged row");
    StsRecord r;
    r.lts_index = std::stoi(f[0]);
    r.sts_index = std::stoi(f[1]);
    r.queues.offload_bits = std::stod(f[2]);
    r.queues.bus_bits = std::stod(f[3]);
    r.queues.processing_gc = std::stod(f[4]);
    r.power_w = std::stod(f[5]);
    r.objective = std::stod(f[6]);
    r.alg1_iterations = std::stoi(f[7]);
    r.alg1_converged = std::stoi(f[8]);
    r.violations = std::stoi(f[9]);
    r.rates_bps = parse_doubles(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, std::string> run_manifest(const ScenarioConfig& cfg) {
  return {{"artifact_version", MTS_VERSION},
          {"baseline", to_string(cfg.baseline)},
          {"config_hash", config_hash(cfg)},
          {"num_lts", std::to_string(cfg.num_lts)},
          {"seed", std::to_string(cfg.seed)}};
}

void write_manifest(std::ostream& os, const std::map<std::string, std::string>& manifest) {
  for (const auto& [k, v] : manifest) os << k << '=' << v << '\n';
}

void emit_metrics(const RunResult& result, const ScenarioConfig& cfg, MetricsFormat format,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    return os;
  };
  auto close = [](std::ofstream& os, const std::filesystem::path& p) {
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + p.string());
  };

  const std::string ext = format == MetricsFormat::Csv ? ".csv" : ".jsonl";
  const auto lts_path = dir / ("lts" + ext);
  const auto sts_path = dir / ("sts" + ext);
  const auto manifest_path = dir / "manifest.txt";
  const auto config_path = dir / "config.json";

  auto lts = open(lts_path);
  if (format == MetricsFormat::Csv) write_lts_csv(lts, result.lts, cfg.num_task_types());
  else write_lts_jsonl(lts, result.lts, cfg.num_task_types());
  close(lts, lts_path);

  auto sts = open(sts_path);
  if (format == MetricsFormat::Csv) write_sts_csv(sts, result.sts);
  else write_sts_jsonl(sts, result.sts);
  close(sts, sts_path);

  auto man = open(manifest_path);
  write_manifest(man, run_manifest(cfg));
  close(man, manifest_path);

  auto conf = open(config_path);
  conf << to_json(cfg) << '\n';
  close(conf, config_path);
}

}  // namespace mts
