#include "lamapf/bench.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lamapf {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t derive_run_seed(uint64_t seed, const std::string& map_name, int agents, int rep) {
  uint64_t state = seed;
  splitmix64(state);
  state ^= fnv1a(map_name);
  splitmix64(state);
  state ^= static_cast<uint64_t>(agents) * 0x9e3779b97f4a7c15ULL;
  splitmix64(state);
  state ^= static_cast<uint64_t>(rep);
  return splitmix64(state);
}

namespace {

// Bounded draw in [0, n) by rejection; unbiased and platform-stable.
uint64_t bounded(uint64_t& state, uint64_t n) {
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = splitmix64(state);
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::vector<int> seeded_permutation(int n, uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  uint64_t state = seed;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(bounded(state, static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

namespace {

int64_t resident_bytes() {
  std::ifstream statm("/proc/self/statm");
  if (!statm) return -1;
  int64_t total = 0, resident = 0;
  statm >> total >> resident;
  if (!statm) return -1;
  return resident * 4096;
}

}  // namespace

bool MemorySampler::supported() { return resident_bytes() >= 0; }

void MemorySampler::start() {
  supported_ = supported();
  if (!supported_) return;
  baseline_ = resident_bytes();
  peak_.store(0);
  running_.store(true);
  worker_ = std::thread([this] {
    while (running_.load(std::memory_order_relaxed)) {
      int64_t now = resident_bytes();
      if (now > baseline_ + peak_.load(std::memory_order_relaxed))
        peak_.store(now - baseline_, std::memory_order_relaxed);
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
  });
}

std::optional<int64_t> MemorySampler::stop() {
  if (!supported_) return std::nullopt;
  running_.store(false);
  if (worker_.joinable()) worker_.join();
  int64_t final_now = resident_bytes();
  int64_t peak = std::max(peak_.load(), final_now - baseline_);
  return std::max<int64_t>(peak, 0);
}

std::vector<RunRecord> run_benchmark(const BenchConfig& config) {
  if (config.map_paths.size() != config.scen_paths.size())
    throw std::invalid_argument("run_benchmark: map/scen path counts differ");
  if (config.map_paths.empty()) throw std::invalid_argument("run_benchmark: no maps");
  if (config.repetitions < 1) throw std::invalid_argument("run_benchmark: repetitions >= 1");
  if (config.timeout_ms <= 0) throw std::invalid_argument("run_benchmark: timeout > 0");
  if (config.methods.empty()) throw std::invalid_argument("run_benchmark: no methods");

  std::vector<RunRecord> records;
  for (size_t m = 0; m < config.map_paths.size(); ++m) {
    GridMap map = load_map_file(config.map_paths[m]);
    std::vector<ScenRow> rows = load_scenario_rows_file(config.scen_paths[m]);
    std::string map_name = config.map_paths[m];
    if (size_t slash = map_name.find_last_of('/'); slash != std::string::npos)
      map_name = map_name.substr(slash + 1);
    if (map_name.size() > 4 && map_name.ends_with(".map"))
      map_name = map_name.substr(0, map_name.size() - 4);

    for (int agents : config.agent_counts) {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        uint64_t run_seed = derive_run_seed(config.seed, map_name, agents, rep);
        std::vector<int> order = seeded_permutation(static_cast<int>(rows.size()), run_seed);
        std::vector<AgentTask> tasks = select_tasks(rows, order, agents, map);
        Instance instance(map, tasks);

        for (auto [method, kind] : config.methods) {
          RunRecord rec;
          rec.map_name = map_name;
          rec.agents = agents;
          rec.method = method;
          rec.solver = kind;
          rec.seed = config.seed;
          rec.rep = rep;

          MemorySampler sampler;
          if (config.sample_memory) sampler.start();
          auto t0 = std::chrono::steady_clock::now();
          Deadline deadline = Deadline::after(std::chrono::milliseconds(config.timeout_ms));

          std::optional<Solution> solution;
          if (method == Method::Raw) {
            SolveResult res = kind == SolverKind::Serial
                                  ? serial_solve(map, tasks, {}, {}, deadline)
                                  : parallel_solve(map, tasks, {}, deadline);
            solution = std::move(res.solution);
          } else {
            LayeredOptions opts;
            opts.decompose.threads = config.threads;
            LayeredOutcome out = layered_solve(instance, kind, deadline, opts);
            solution = std::move(out.solution);
            rec.decomp_ms = {out.decomposition.steps[0].ms, out.decomposition.steps[1].ms,
                             out.decomposition.steps[2].ms};
            rec.rate = {out.decomposition.steps[0].rate, out.decomposition.steps[1].rate,
                        out.decomposition.steps[2].rate};
            rec.subproblems = {out.decomposition.steps[0].subproblems,
                               out.decomposition.steps[1].subproblems,
                               out.decomposition.steps[2].subproblems};
          }
          rec.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
          if (config.sample_memory) rec.peak_mem_bytes = sampler.stop();

          bool valid = solution && validate_solution(map, tasks, *solution).empty();
          rec.success = valid && rec.wall_ms <= static_cast<double>(config.timeout_ms);
          if (rec.success) {
            rec.soc = sum_of_costs(*solution);
            rec.makespan = makespan(*solution);
          }
          records.push_back(std::move(rec));
        }
      }
    }
  }
  return records;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void emit_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  out << "map,agents,method,solver,seed,rep,success,wall_ms,"
         "decomp_step1_ms,decomp_step2_ms,decomp_step3_ms,peak_mem_bytes,"
         "soc,makespan,rate_step1,rate_step2,rate_step3,"
         "subproblems_step1,subproblems_step2,subproblems_step3\n";
  for (const RunRecord& r : records) {
    out << csv_escape(r.map_name) << ',' << r.agents << ','
        << (r.method == Method::Raw ? "raw" : "layered") << ','
        << (r.solver == SolverKind::Serial ? "serial" : "parallel") << ',' << r.seed
        << ',' << r.rep << ',' << (r.success ? 1 : 0) << ',' << r.wall_ms << ',';
    if (r.decomp_ms)
      out << (*r.decomp_ms)[0] << ',' << (*r.decomp_ms)[1] << ',' << (*r.decomp_ms)[2];
    else
      out << ",,";
    out << ',';
    if (r.peak_mem_bytes) out << *r.peak_mem_bytes;
    out << ',';
    if (r.soc) out << *r.soc;
    out << ',';
    if (r.makespan) out << *r.makespan;
    out << ',';
    if (r.rate)
      out << (*r.rate)[0] << ',' << (*r.rate)[1] << ',' << (*r.rate)[2];
    else
      out << ",,";
    out << ',';
    if (r.subproblems)
      out << (*r.subproblems)[0] << ',' << (*r.subproblems)[1] << ','
          << (*r.subproblems)[2];
    else
      out << ",,";
    out << '\n';
  }
}

}  // namespace lamapf
