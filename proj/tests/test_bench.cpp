#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lamapf/bench.hpp"
#include "support.hpp"

using namespace lamapf;

namespace {

std::string data_dir() {
  const char* env = std::getenv("LAMAPF_DATA_DIR");
  return env ? env : LAMAPF_DATA_DIR;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

RunRecord sample_record() {
  RunRecord r;
  r.map_name = "empty-16-16";
  r.agents = 8;
  r.method = Method::Layered;
  r.solver = SolverKind::Serial;
  r.seed = 7;
  r.rep = 0;
  r.success = true;
  r.wall_ms = 12.5;
  r.decomp_ms = {1.0, 2.0, 3.0};
  r.soc = 80;
  r.makespan = 14;
  r.rate = {0.5, 0.5, 0.25};
  r.subproblems = {2, 2, 4};
  return r;
}

}  // namespace

TEST_CASE("csv: one record gives header plus one row") {
  std::ostringstream out;
  emit_csv({sample_record()}, out);
  auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size() == rows[1].size());
  CHECK(rows[0][0] == "map");
  CHECK(rows[1][0] == "empty-16-16");
  CHECK_THROWS_AS(emit_csv({}, out), std::invalid_argument);
}

TEST_CASE("csv: optional fields emit empty cells, not zeros") {
  RunRecord r = sample_record();
  r.method = Method::Raw;
  r.success = false;
  r.decomp_ms.reset();
  r.rate.reset();
  r.subproblems.reset();
  r.soc.reset();
  r.makespan.reset();
  r.peak_mem_bytes.reset();
  std::ostringstream out;
  emit_csv({r}, out);
  auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 2);
  auto& header = rows[0];
  auto& row = rows[1];
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i].rfind("decomp_", 0) == 0 || header[i].rfind("rate_", 0) == 0 ||
        header[i].rfind("subproblems_", 0) == 0 || header[i] == "soc" ||
        header[i] == "makespan" || header[i] == "peak_mem_bytes")
      CHECK(row[i].empty());
  }
}

TEST_CASE("csv: round-trip parse reproduces the record fields") {
  RunRecord r = sample_record();
  std::ostringstream out;
  emit_csv({r}, out);
  auto rows = parse_csv(out.str());
  auto& row = rows[1];
  CHECK(row[1] == "8");
  CHECK(row[2] == "layered");
  CHECK(row[3] == "serial");
  CHECK(row[4] == "7");
  CHECK(row[6] == "1");
  CHECK(std::stod(row[7]) == doctest::Approx(12.5));
  CHECK(std::stod(row[8]) == doctest::Approx(1.0));
  CHECK(std::stoll(row[12]) == 80);
  CHECK(std::stoll(row[13]) == 14);
  CHECK(std::stod(row[16]) == doctest::Approx(0.25));
  CHECK(std::stoi(row[19]) == 4);
}

TEST_CASE("seed derivation is stable and sensitive") {
  CHECK(derive_run_seed(1, "a.map", 10, 0) == derive_run_seed(1, "a.map", 10, 0));
  CHECK(derive_run_seed(1, "a.map", 10, 0) != derive_run_seed(1, "a.map", 10, 1));
  CHECK(derive_run_seed(1, "a.map", 10, 0) != derive_run_seed(2, "a.map", 10, 0));
  CHECK(derive_run_seed(1, "a.map", 10, 0) != derive_run_seed(1, "b.map", 10, 0));

  auto p1 = seeded_permutation(50, 99);
  auto p2 = seeded_permutation(50, 99);
  CHECK(p1 == p2);
  CHECK(p1 != seeded_permutation(50, 100));
  std::vector<int> sorted = p1;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("memory sampler sees a 64 MiB allocation") {
  if (!MemorySampler::supported()) {
    MESSAGE("memory sampling unsupported on this host; skipping");
    return;
  }
  MemorySampler sampler;
  sampler.start();
  constexpr size_t bytes = 64u << 20;
  std::vector<char> block(bytes);
  for (size_t i = 0; i < bytes; i += 1024) block[i] = static_cast<char>(i);
  auto peak = sampler.stop();
  // keep the block alive past the final sample
  CHECK(block[bytes - 1024] == static_cast<char>(bytes - 1024));
  REQUIRE(peak.has_value());
  CHECK(*peak >= static_cast<int64_t>(bytes));
}

TEST_CASE("benchmark campaign on the shipped fixtures") {
  BenchConfig config;
  config.map_paths = {data_dir() + "/empty-16-16.map"};
  config.scen_paths = {data_dir() + "/empty-16-16.scen"};
  config.agent_counts = {8};
  config.repetitions = 2;
  config.timeout_ms = 30000;
  config.methods = {{Method::Raw, SolverKind::Serial}, {Method::Layered, SolverKind::Serial}};
  config.seed = 42;
  config.sample_memory = false;

  auto records = run_benchmark(config);
  REQUIRE(records.size() == 4);  // 1 map x 1 count x 2 reps x 2 methods
  for (const RunRecord& r : records) {
    CHECK(r.map_name == "empty-16-16");
    CHECK(r.agents == 8);
    if (r.success) {
      REQUIRE(r.soc);
      REQUIRE(r.makespan);
      CHECK(*r.soc >= *r.makespan);
      CHECK(*r.makespan >= 1);
    }
    if (r.method == Method::Layered) {
      REQUIRE(r.rate);
      CHECK((*r.rate)[0] >= (*r.rate)[1]);
      CHECK((*r.rate)[1] >= (*r.rate)[2]);
      for (double rate : *r.rate) {
        CHECK(rate > 0.0);
        CHECK(rate <= 1.0);
      }
    } else {
      CHECK(!r.rate);
      CHECK(!r.decomp_ms);
    }
  }

  // same seed, same sampling: the deterministic fields repeat
  auto again = run_benchmark(config);
  REQUIRE(again.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].success == again[i].success);
    CHECK(records[i].soc == again[i].soc);
    CHECK(records[i].makespan == again[i].makespan);
    CHECK(records[i].rate == again[i].rate);
    CHECK(records[i].subproblems == again[i].subproblems);
  }
}

TEST_CASE("a run past the timeout is recorded as failed data, not an error") {
  BenchConfig config;
  config.map_paths = {data_dir() + "/maze-32-32-2.map"};
  config.scen_paths = {data_dir() + "/maze-32-32-2.scen"};
  config.agent_counts = {40};
  config.repetitions = 1;
  config.timeout_ms = 1;  // decomposition alone takes longer
  config.methods = {{Method::Layered, SolverKind::Serial}};
  config.seed = 7;
  config.sample_memory = false;
  auto records = run_benchmark(config);
  REQUIRE(records.size() == 1);
  CHECK(!records[0].success);
  CHECK(!records[0].soc);
  CHECK(!records[0].makespan);
}

TEST_CASE("configuration errors abort with context") {
  BenchConfig config;
  config.map_paths = {data_dir() + "/empty-16-16.map"};
  config.scen_paths = {};
  CHECK_THROWS_AS(run_benchmark(config), std::invalid_argument);
  config.scen_paths = {data_dir() + "/empty-16-16.scen"};
  config.agent_counts = {4};
  config.methods = {{Method::Raw, SolverKind::Serial}};
  config.timeout_ms = 0;
  CHECK_THROWS_AS(run_benchmark(config), std::invalid_argument);
  config.timeout_ms = 1000;
  config.map_paths = {data_dir() + "/missing.map"};
  config.scen_paths = {data_dir() + "/missing.scen"};
  CHECK_THROWS_AS(run_benchmark(config), std::runtime_error);
}
