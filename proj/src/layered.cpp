#include "lamapf/layered.hpp"

#include <chrono>
#include <stdexcept>
#include <unordered_map>

namespace lamapf {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::vector<Solution> merge_results(std::vector<Solution> solutions) {
  std::unordered_map<int, int> last_occupied;  // cell -> last time standing there
  for (Solution& sol : solutions) {
    std::vector<Path*> paths;
    paths.reserve(sol.paths.size());
    for (auto& [id, p] : sol.paths) paths.push_back(&p);
    for (int t = 1;; ++t) {
      bool need_wait = false, all_finished = true;
      for (Path* p : paths) {
        if (t > p->length() - 1) continue;
        all_finished = false;
        auto it = last_occupied.find(p->cells[t]);
        if (it != last_occupied.end() && it->second >= t) {
          need_wait = true;
          break;
        }
      }
      if (all_finished) break;
      if (need_wait) {
        // Delay the whole solution one step: every unfinished path repeats
        // its previous cell at index t. Relative timing inside the solution
        // is preserved, so its internal conflict-freedom is too. The cells
        // the paths stand on while waiting are occupancy like any other and
        // must enter the table, or a later solution could pass through a
        // waiting agent.
        for (Path* p : paths)
          if (t <= p->length() - 1) {
            p->cells.insert(p->cells.begin() + t, p->cells[t - 1]);
            last_occupied[p->cells[t]] = t;
          }
      } else {
        for (Path* p : paths)
          if (t <= p->length() - 1) last_occupied[p->cells[t]] = t;
      }
    }
  }
  return solutions;
}

LayeredOutcome layered_solve(const Instance& instance, SolverKind kind,
                             Deadline deadline, const LayeredOptions& opts) {
  auto t_total = Clock::now();
  if (!is_instance_solvable(instance, opts.decompose.threads))
    throw std::invalid_argument("layered_solve: instance is not solvable");

  LayeredOutcome out;
  out.decomposition = decompose_instance(instance, opts.decompose);
  out.decomposition_ms = out.decomposition.steps[0].ms + out.decomposition.steps[1].ms +
                         out.decomposition.steps[2].ms;

  const GridMap& map = instance.map;
  const std::vector<Level>& levels = out.decomposition.levels;
  const int n = static_cast<int>(levels.size());

  std::vector<Solution> level_solutions;
  ExternalConstraint accumulated;  // serial kind only
  for (int i = 0; i < n; ++i) {
    auto t_level = Clock::now();
    std::vector<int> blocked;
    for (int j = 0; j < n; ++j) {
      if (j > i)
        for (int a : levels[j].agents)
          blocked.push_back(map.index_of(instance.tasks[a].start));
      else if (j < i && kind == SolverKind::Parallel)
        for (int a : levels[j].agents)
          blocked.push_back(map.index_of(instance.tasks[a].target));
    }
    std::vector<AgentTask> tasks;
    for (int a : levels[i].agents) tasks.push_back(instance.tasks[a]);

    SolveResult res = kind == SolverKind::Serial
                          ? opts.serial(map, tasks, accumulated, blocked, deadline)
                          : opts.parallel(map, tasks, blocked, deadline);
    out.per_level_ms.push_back(ms_since(t_level));
    if (!res.solution) {
      out.failure_level = i;
      out.timed_out = res.timed_out || deadline.expired();
      out.total_ms = ms_since(t_total);
      return out;
    }
    if (kind == SolverKind::Serial)
      for (const auto& [id, p] : res.solution->paths) accumulated.paths.push_back(p);
    level_solutions.push_back(std::move(*res.solution));
  }

  auto t_merge = Clock::now();
  if (kind == SolverKind::Parallel) level_solutions = merge_results(std::move(level_solutions));
  Solution final;
  for (Solution& sol : level_solutions)
    for (auto& [id, p] : sol.paths) final.paths.emplace(id, std::move(p));
  out.merge_ms = ms_since(t_merge);

  if (!validate_solution(map, instance.tasks, final).empty()) {
    out.validation_failed = true;
    out.failure_level = n > 0 ? n - 1 : 0;
    out.total_ms = ms_since(t_total);
    return out;
  }
  out.solution = std::move(final);
  out.total_ms = ms_since(t_total);
  return out;
}

}  // namespace lamapf
