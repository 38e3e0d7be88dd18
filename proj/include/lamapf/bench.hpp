#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lamapf/layered.hpp"
#include "lamapf/moving_ai.hpp"

namespace lamapf {

enum class Method { Raw, Layered };

struct RunRecord {
  std::string map_name;
  int agents = 0;
  Method method = Method::Raw;
  SolverKind solver = SolverKind::Serial;
  uint64_t seed = 0;
  int rep = 0;
  bool success = false;
  double wall_ms = 0.0;
  std::optional<std::array<double, 3>> decomp_ms;   // layered rows only
  std::optional<int64_t> peak_mem_bytes;            // empty when unsupported
  std::optional<int64_t> soc;                       // successful rows only
  std::optional<int64_t> makespan;
  std::optional<std::array<double, 3>> rate;        // layered rows only
  std::optional<std::array<int, 3>> subproblems;
};

struct BenchConfig {
  std::vector<std::string> map_paths;
  std::vector<std::string> scen_paths;  // parallel to map_paths
  std::vector<int> agent_counts;
  int repetitions = 1;
  int64_t timeout_ms = 30000;
  std::vector<std::pair<Method, SolverKind>> methods;
  uint64_t seed = 0;
  bool sample_memory = true;
  int threads = 1;  // decomposition execution lanes
};

// splitmix64 step; the benchmark's entire seed derivation is built from it.
uint64_t splitmix64(uint64_t& state);
// FNV-1a over bytes; hashes map names into the per-run seed.
uint64_t fnv1a(const std::string& text);
// Deterministic Fisher-Yates permutation of 0..n-1 driven by splitmix64 with
// rejection-sampled bounded draws, stable across platforms.
std::vector<int> seeded_permutation(int n, uint64_t seed);
// Per-run stream seed: seed, fnv1a(map name), agent count and repetition
// folded through splitmix64.
uint64_t derive_run_seed(uint64_t seed, const std::string& map_name, int agents, int rep);

// Samples this process's resident set every ~1 ms on a background thread and
// reports the peak growth over the baseline. Returns nullopt where /proc is
// unavailable; values under the sampling resolution report 0.
class MemorySampler {
 public:
  static bool supported();
  void start();
  std::optional<int64_t> stop();  // peak delta in bytes

 private:
  std::thread worker_;
  std::atomic<bool> running_{false};
  std::atomic<int64_t> peak_{0};
  int64_t baseline_ = 0;
  bool supported_ = false;
};

// Runs every (map, agent count, repetition, method) combination under the
// timeout, validating solutions before recording success. Per-run failures
// are data; configuration and I/O problems throw.
std::vector<RunRecord> run_benchmark(const BenchConfig& config);

// RFC-4180-style CSV with a fixed header; optional fields emit empty cells.
void emit_csv(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace lamapf
