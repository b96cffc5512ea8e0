#pragma once

#include "mts/config.hpp"
#include "mts/engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mts {

enum class MetricsFormat { Csv, Jsonl };

MetricsFormat parse_format(std::string_view s);

/// %.17g
std::string format_double(double v);

std::vector<std::string> lts_columns(int num_task_types);
std::vector<std::string> sts_columns();

void write_lts_csv(std::ostream& os, const std::vector<LtsRecord>& records, int num_task_types);
void write_sts_csv(std::ostream& os, const std::vector<StsRecord>& records);
void write_lts_jsonl(std::ostream& os, const std::vector<LtsRecord>& records, int num_task_types);
void write_sts_jsonl(std::ostream& os, const std::vector<StsRecord>& records);

std::vector<LtsRecord> read_lts_csv(std::istream& is);
std::vector<StsRecord> read_sts_csv(std::istream& is);

/// key=value lines, sorted by key.
std::map<std::string, std::string> run_manifest(const ScenarioConfig& cfg);
void write_manifest(std::ostream& os, const std::map<std::string, std::string>& manifest);

/// Writes lts.<ext>, sts.<ext>, manifest.txt and config.json into `dir`
/// (created if missing). Throws std::runtime_error naming the path on I/O failure.
void emit_metrics(const RunResult& result, const ScenarioConfig& cfg, MetricsFormat format,
                  const std::filesystem::path& dir);

}  // namespace mts
