#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "kwidth/reports/json_io.hpp"
#include "kwidth/reports/result_cache.hpp"
#include "kwidth/reports/sweep.hpp"

using namespace kwidth;
using namespace kwidth::reports;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kwidth-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

SweepConfig small_config() {
  return SweepConfig::from_json(Json::parse(R"({
    "q": [0.2, 0.5], "beta": [0, 0.5, 1.7], "n_range": {"from": 1, "to": 4},
    "workers": 1
  })"));
}

std::string run(const SweepConfig& c, SweepSummary* summary = nullptr) {
  std::ostringstream out;
  SweepOptions opts;
  opts.timestamp = false;
  const auto s = run_sweep(c, out, opts);
  if (summary) *summary = s;
  return out.str();
}

}  // namespace

TEST(Cache, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Cache, StoreLoadRoundTrip) {
  const ResultCache cache(fresh_dir("cache"));
  EXPECT_FALSE(cache.load("k1").has_value());
  cache.store("k1", "payload-1");
  cache.store("k1", "payload-2");
  EXPECT_EQ(cache.load("k1").value(), "payload-2");
  EXPECT_NE(cache.path_for("k1"), cache.path_for("k2"));
  fs::remove_all(cache.directory());
}

TEST(Sweep, ConfigParsing) {
  const auto c = small_config();
  EXPECT_EQ(c.n_list, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(c.format, OutputFormat::Csv);
  EXPECT_TRUE(c.oracle);
  EXPECT_THROW(SweepConfig::from_json(Json::parse(R"({"q": [1.5], "beta": [0], "n": [1]})")), Error);
  EXPECT_THROW(SweepConfig::from_json(Json::parse(R"({"q": [0.5], "beta": [0]})")), Error);
  EXPECT_THROW(SweepConfig::from_json(Json::parse(R"({"q": [0.5], "beta": [0], "n": [1.5]})")), Error);
  EXPECT_THROW(SweepConfig::from_json(Json::parse(R"({"q": [0.5], "beta": [0], "n": [1], "format": "xml"})")),
               Error);
  EXPECT_THROW(SweepConfig::from_json(Json::parse("[1, 2]")), Error);
}

TEST(Sweep, EnvironmentOverrides) {
  auto c = small_config();
  ::setenv("KWIDTH_WORKERS", "3", 1);
  ::setenv("KWIDTH_CACHE_DIR", "/tmp/somewhere", 1);
  c.apply_environment();
  EXPECT_EQ(c.workers, 3);
  EXPECT_EQ(c.cache_dir, "/tmp/somewhere");
  ::setenv("KWIDTH_WORKERS", "zero", 1);
  EXPECT_THROW(c.apply_environment(), Error);
  ::unsetenv("KWIDTH_WORKERS");
  ::unsetenv("KWIDTH_CACHE_DIR");
}

TEST(Sweep, CsvIsDeterministicAcrossWorkersAndCache) {
  auto c = small_config();
  SweepSummary s1;
  const std::string serial = run(c, &s1);
  EXPECT_EQ(s1.total, 24u);
  EXPECT_EQ(s1.written, 24u);
  EXPECT_FALSE(s1.interrupted);

  c.workers = 4;
  EXPECT_EQ(run(c), serial);

  c.cache_dir = fresh_dir("sweep").string();
  EXPECT_EQ(run(c), serial);
  SweepSummary s2;
  EXPECT_EQ(run(c, &s2), serial);
  EXPECT_EQ(s2.cache_hits, 24u);
  fs::remove_all(c.cache_dir);

  std::istringstream lines(serial);
  std::string first;
  std::getline(lines, first);
  EXPECT_EQ(first, csv_header());
}

TEST(Sweep, RowsCarryWidthAndFlags) {
  auto c = small_config();
  c.format = OutputFormat::Json;
  const Json doc = Json::parse(run(c));
  EXPECT_FALSE(doc.contains("generated"));
  ASSERT_EQ(doc.at("rows").size(), 24u);
  for (const Json& j : doc.at("rows")) {
    const SweepRow row = SweepRow::from_json(j);
    EXPECT_EQ(row.to_json(), j);
    EXPECT_TRUE(row.error.empty());
    ASSERT_TRUE(row.oracle_delta.has_value());
    EXPECT_LE(*row.oracle_delta, 1e-10);
    EXPECT_LE(row.sandwich_lo, row.sandwich_hi);
    if (row.q == 0.2 && row.beta == 0.0) EXPECT_TRUE(row.nq_flag);
    if (row.q == 0.2 && row.beta == 0.5) EXPECT_FALSE(row.nq_flag);
  }
  const SweepRow first = SweepRow::from_json(doc.at("rows").at(0));
  EXPECT_EQ(first.q, 0.2);
  EXPECT_EQ(first.beta, 0.0);
  EXPECT_EQ(first.n, 1);
  EXPECT_DOUBLE_EQ(first.theta_n, 0.5);
}

TEST(Sweep, IntegerPhaseSmallQFlagsEveryRow) {
  const auto row = evaluate_row(0.15, 2.0, 1, small_config(), 1);
  EXPECT_TRUE(row.nq_flag);
  EXPECT_TRUE(row.cy2n_holds.has_value());
}

TEST(Sweep, StopFlagInterrupts) {
  auto c = small_config();
  std::atomic<bool> stop{true};
  std::ostringstream out;
  SweepOptions opts;
  opts.timestamp = false;
  opts.stop = &stop;
  const auto s = run_sweep(c, out, opts);
  EXPECT_TRUE(s.interrupted);
  EXPECT_EQ(s.written, 0u);
  EXPECT_EQ(out.str(), csv_header() + "\n");
}

TEST(Sweep, CsvLineForFailedRow) {
  SweepRow row;
  row.q = 0.5;
  row.beta = 0;
  row.n = 3;
  row.error = "TolUnreachable: x";
  EXPECT_EQ(csv_line(row), "0.5,0,3,,,,,,,0,,");
}

TEST(JsonIo, NodesRoundTrip) {
  const auto nodes = reference_nodes_negative();
  const Json j = to_json(nodes);
  EXPECT_EQ(j.at("x").at(0), Json::array({1, 18}));
  EXPECT_EQ(node_vectors_from_json(j).y, nodes.y);
  EXPECT_THROW(node_vectors_from_json(Json::parse(R"({"x": [[1, 0]], "y": [[1, 2]]})")), Error);
  EXPECT_THROW(node_vectors_from_json(Json::parse(R"({"x": "no"})")), Error);
}

TEST(JsonIo, PathsAndExitCodes) {
  EXPECT_EQ(parse_path("lemma2"), DerivativePath::Lemma2);
  EXPECT_EQ(to_string(DerivativePath::Direct), "direct");
  EXPECT_THROW(parse_path("fast"), Error);
  EXPECT_EQ(exit_code(ErrorKind::Validation), 2);
  EXPECT_EQ(exit_code(ErrorKind::Domain), 2);
  EXPECT_EQ(exit_code(ErrorKind::NotFound), 3);
  EXPECT_EQ(exit_code(ErrorKind::BracketFailure), 4);
  EXPECT_EQ(exit_code(ErrorKind::TolUnreachable), 4);
  const Json e = error_json(ErrorKind::NotFound, "cap");
  EXPECT_EQ(e.at("error").at("message"), "cap");
}

TEST(JsonIo, WidthReportFields) {
  const Json j = to_json(exact_width(NeumannParams::make(0.5, 0.5), 2));
  EXPECT_DOUBLE_EQ(j.at("width").get<double>(), 0.15916461950275529885);
  EXPECT_DOUBLE_EQ(j.at("theta_n").get<double>(), 0.75663378829242891516);
  EXPECT_TRUE(j.at("sandwich_holds").get<bool>());
  EXPECT_EQ(j.at("root").at("branch"), "half");
}
