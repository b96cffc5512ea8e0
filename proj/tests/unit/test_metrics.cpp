#include "mts/metrics.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mts;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("mts_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Metrics, EmptyStreamHeaderOnly) {
  ScenarioConfig cfg;
  const auto dir = scratch("empty");
  emit_metrics(RunResult{}, cfg, MetricsFormat::Csv, dir);
  EXPECT_EQ(count_lines(slurp(dir / "lts.csv")), 1);
  EXPECT_EQ(count_lines(slurp(dir / "sts.csv")), 1);
  const auto manifest = slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("config_hash=" + config_hash(cfg)), std::string::npos);
  EXPECT_EQ(load_config(slurp(dir / "config.json")), cfg);
  fs::remove_all(dir);
}

TEST(Metrics, UtilityRecomputableFromColumns) {
  ScenarioConfig cfg;
  cfg.num_lts = 1;
  const auto r = run(cfg);
  std::ostringstream os;
  write_lts_csv(os, r.lts, 3);
  std::istringstream is(os.str());
  const auto back = read_lts_csv(is);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].utility, back[0].revenue - back[0].eta * back[0].cost);
  EXPECT_EQ(count_lines(os.str()), 2);
}

TEST(Metrics, CsvRoundTrip) {
  ScenarioConfig cfg;
  cfg.num_lts = 3;
  const auto r = run(cfg);
  std::ostringstream lo, so;
  write_lts_csv(lo, r.lts, 3);
  write_sts_csv(so, r.sts);
  std::istringstream li(lo.str()), si(so.str());
  EXPECT_EQ(read_lts_csv(li), r.lts);
  EXPECT_EQ(read_sts_csv(si), r.sts);
}

TEST(Metrics, JsonlOneObjectPerRecord) {
  ScenarioConfig cfg;
  cfg.num_lts = 2;
  const auto r = run(cfg);
  const auto dir = scratch("jsonl");
  emit_metrics(r, cfg, MetricsFormat::Jsonl, dir);
  const auto lts = slurp(dir / "lts.jsonl");
  EXPECT_EQ(count_lines(lts), 2);
  EXPECT_EQ(count_lines(slurp(dir / "sts.jsonl")), 20);
  EXPECT_EQ(lts.front(), '{');
  fs::remove_all(dir);
}

TEST(Metrics, ColumnsAndFormat) {
  const auto cols = lts_columns(3);
  EXPECT_EQ(cols.front(), "lts");
  EXPECT_NE(std::find(cols.begin(), cols.end(), "admitted_type3"), cols.end());
  EXPECT_NE(std::find(cols.begin(), cols.end(), "theorem1_holds"), cols.end());
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(parse_format("jsonl"), MetricsFormat::Jsonl);
  EXPECT_THROW(parse_format("xml"), std::exception);
}

TEST(Metrics, UnwritableDirectoryNamesPath) {
  ScenarioConfig cfg;
  const fs::path bad = "/proc/mts_cannot_write_here";
  try {
    emit_metrics(RunResult{}, cfg, MetricsFormat::Csv, bad);
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("mts_cannot_write_here"), std::string::npos) << e.what();
  }
}
