#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lamapf/bench.hpp"
#include "lamapf/decompose.hpp"
#include "lamapf/layered.hpp"
#include "lamapf/solution_io.hpp"

using namespace lamapf;

namespace {

Instance make_instance(const std::string& map_path, const std::string& scen_path,
                       int agents, uint64_t seed, bool sample) {
  GridMap map = load_map_file(map_path);
  std::vector<AgentTask> tasks;
  if (sample) {
    std::vector<ScenRow> rows = load_scenario_rows_file(scen_path);
    std::vector<int> order =
        seeded_permutation(static_cast<int>(rows.size()),
                           derive_run_seed(seed, map_path, agents, 0));
    tasks = select_tasks(rows, order, agents, map);
  } else {
    tasks = load_scenario_file(scen_path, agents, map);
  }
  return Instance(std::move(map), std::move(tasks));
}

int run_decompose(const std::string& map_path, const std::string& scen_path, int agents,
                  uint64_t seed, bool sample, int threads) {
  Instance inst = make_instance(map_path, scen_path, agents, seed, sample);
  if (!is_instance_solvable(inst, threads)) {
    std::cerr << "instance is not solvable\n";
    return 1;
  }
  DecomposeOptions opts;
  opts.threads = threads;
  Decomposition d = decompose_instance(inst, opts);
  write_decomposition_report(d, std::cout);
  std::cerr << "decomposition: " << d.steps[0].ms + d.steps[1].ms + d.steps[2].ms
            << " ms (steps " << d.steps[0].ms << " / " << d.steps[1].ms << " / "
            << d.steps[2].ms << ")\n";
  return 0;
}

int run_solve(const std::string& map_path, const std::string& scen_path, int agents,
              const std::string& method, const std::string& solver, int64_t timeout_ms,
              uint64_t seed, bool sample, int threads, const std::string& out_path) {
  Instance inst = make_instance(map_path, scen_path, agents, seed, sample);
  SolverKind kind = solver == "parallel" ? SolverKind::Parallel : SolverKind::Serial;
  Deadline deadline = Deadline::after(std::chrono::milliseconds(timeout_ms));

  std::optional<Solution> solution;
  if (method == "raw") {
    SolveResult res = kind == SolverKind::Serial
                          ? serial_solve(inst.map, inst.tasks, {}, {}, deadline)
                          : parallel_solve(inst.map, inst.tasks, {}, deadline);
    solution = std::move(res.solution);
  } else {
    LayeredOptions opts;
    opts.decompose.threads = threads;
    LayeredOutcome out = layered_solve(inst, kind, deadline, opts);
    if (out.failure_level)
      std::cerr << "failed at level " << *out.failure_level
                << (out.timed_out ? " (timeout)" : "") << "\n";
    solution = std::move(out.solution);
  }
  if (!solution) {
    std::cerr << "no solution\n";
    return 1;
  }
  auto conflicts = validate_solution(inst.map, inst.tasks, *solution);
  if (!conflicts.empty()) {
    std::cerr << conflicts.size() << " conflicts in produced solution\n";
    return 1;
  }
  std::cerr << "solved: agents " << agents << " soc " << sum_of_costs(*solution)
            << " makespan " << makespan(*solution) << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    write_solution(inst.map, *solution, out);
  } else {
    write_solution(inst.map, *solution, std::cout);
  }
  return 0;
}

int run_validate(const std::string& map_path, const std::string& scen_path, int agents,
                 const std::string& solution_path) {
  GridMap map = load_map_file(map_path);
  std::vector<AgentTask> tasks = load_scenario_file(scen_path, agents, map);
  std::ifstream in(solution_path);
  if (!in) {
    std::cerr << "cannot open " << solution_path << "\n";
    return 2;
  }
  Solution sol = read_solution(map, in);
  auto conflicts = validate_solution(map, tasks, sol);
  for (const Conflict& c : conflicts)
    std::cout << (c.kind == Conflict::Kind::Vertex ? "vertex" : "swap") << " conflict: agents "
              << c.agent_a << " and " << c.agent_b << " at t=" << c.time << " cell "
              << map.coord_of(c.cell_a) << "\n";
  if (conflicts.empty()) {
    std::cout << "valid: " << sol.paths.size() << " paths, soc " << sum_of_costs(sol)
              << " makespan " << makespan(sol) << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAPF instance decomposition and layered solving"};
  app.require_subcommand(1);

  std::vector<std::string> maps, scens;
  std::string map_path, scen_path, method = "layered", solver = "serial", out_path;
  std::string agents_list = "10";
  int agents = 10, reps = 1, threads = 1;
  int64_t timeout_ms = 30000;
  uint64_t seed = 0;
  bool no_sample = false, no_memory = false;

  CLI::App* dec = app.add_subcommand("decompose", "decompose an instance and report levels");
  dec->add_option("--map", map_path)->required();
  dec->add_option("--scen", scen_path)->required();
  dec->add_option("--agents", agents);
  dec->add_option("--seed", seed);
  dec->add_option("--threads", threads);
  dec->add_flag("--first-rows", no_sample, "take the first scen rows instead of sampling");

  CLI::App* sol = app.add_subcommand("solve", "solve one instance");
  sol->add_option("--map", map_path)->required();
  sol->add_option("--scen", scen_path)->required();
  sol->add_option("--agents", agents);
  sol->add_option("--method", method)->check(CLI::IsMember({"raw", "layered"}));
  sol->add_option("--solver", solver)->check(CLI::IsMember({"serial", "parallel"}));
  sol->add_option("--timeout-ms", timeout_ms);
  sol->add_option("--seed", seed);
  sol->add_option("--threads", threads);
  sol->add_option("--out", out_path);
  sol->add_flag("--first-rows", no_sample);

  CLI::App* ben = app.add_subcommand("bench", "run a benchmark campaign to CSV");
  ben->add_option("--map", maps)->required();
  ben->add_option("--scen", scens)->required();
  ben->add_option("--agents", agents_list, "comma-separated agent counts");
  ben->add_option("--reps", reps);
  ben->add_option("--timeout-ms", timeout_ms);
  ben->add_option("--method", method)->check(CLI::IsMember({"raw", "layered", "both"}));
  ben->add_option("--solver", solver)->check(CLI::IsMember({"serial", "parallel", "both"}));
  ben->add_option("--seed", seed);
  ben->add_option("--threads", threads);
  ben->add_option("--out", out_path);
  ben->add_flag("--no-memory", no_memory, "skip memory sampling");

  CLI::App* val = app.add_subcommand("validate", "validate a solution file");
  val->add_option("--map", map_path)->required();
  val->add_option("--scen", scen_path)->required();
  val->add_option("--agents", agents);
  val->add_option("--solution", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed())
      return run_decompose(map_path, scen_path, agents, seed, !no_sample, threads);
    if (sol->parsed())
      return run_solve(map_path, scen_path, agents, method, solver, timeout_ms, seed,
                       !no_sample, threads, out_path);
    if (val->parsed()) return run_validate(map_path, scen_path, agents, out_path);

    BenchConfig config;
    config.map_paths = maps;
    config.scen_paths = scens;
    for (size_t pos = 0; pos < agents_list.size();) {
      size_t comma = agents_list.find(',', pos);
      if (comma == std::string::npos) comma = agents_list.size();
      config.agent_counts.push_back(std::stoi(agents_list.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    config.repetitions = reps;
    config.timeout_ms = timeout_ms;
    config.seed = seed;
    config.threads = threads;
    config.sample_memory = !no_memory;
    for (Method m : {Method::Raw, Method::Layered}) {
      if (method == "raw" && m != Method::Raw) continue;
      if (method == "layered" && m != Method::Layered) continue;
      for (SolverKind k : {SolverKind::Serial, SolverKind::Parallel}) {
        if (solver == "serial" && k != SolverKind::Serial) continue;
        if (solver == "parallel" && k != SolverKind::Parallel) continue;
        config.methods.emplace_back(m, k);
      }
    }
    std::vector<RunRecord> records = run_benchmark(config);
    if (out_path.empty()) {
      emit_csv(records, std::cout);
    } else {
      std::ofstream out(out_path);
      emit_csv(records, out);
    }
    int ok = 0;
    for (const RunRecord& r : records) ok += r.success ? 1 : 0;
    std::cerr << "campaign: " << records.size() << " runs, " << ok << " successful\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
