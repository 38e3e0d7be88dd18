#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lamapf/grid.hpp"

namespace lamapf {

// One cell per timestep, starting at t=0. Cells are linear map indices;
// consecutive entries are identical (wait) or grid-adjacent. Agents remain
// at their final cell forever after the path ends.
struct Path {
  std::vector<int> cells;
  int length() const { return static_cast<int>(cells.size()); }
  int at(int t) const { return cells[std::min<size_t>(t, cells.size() - 1)]; }
};

struct Solution {
  std::map<int, Path> paths;  // agent id -> path
};

int64_t sum_of_costs(const Solution& s);
int64_t makespan(const Solution& s);

// Paths from earlier-solved subproblems; each occupies its final cell for
// all later timesteps.
struct ExternalConstraint {
  std::vector<Path> paths;
};

class Deadline {
 public:
  static Deadline never() { return Deadline{}; }
  static Deadline after(std::chrono::milliseconds budget) {
    Deadline d;
    d.unlimited_ = false;
    d.tp_ = std::chrono::steady_clock::now() + budget;
    return d;
  }
  bool expired() const {
    return !unlimited_ && std::chrono::steady_clock::now() >= tp_;
  }

 private:
  std::chrono::steady_clock::time_point tp_{};
  bool unlimited_ = true;
};

struct SolveResult {
  std::optional<Solution> solution;
  bool timed_out = false;
};

// Prioritized planning in the style of cooperative A*: agents ordered by
// descending start-to-target BFS distance (ties by id) each plan a space-time
// path avoiding vertex and swap conflicts with external paths and previously
// planned ones. Incomplete; absent on any per-agent failure.
SolveResult serial_solve(const GridMap& map, const std::vector<AgentTask>& tasks,
                         const ExternalConstraint& external,
                         std::span<const int> blocked_cells, Deadline deadline);

// PIBT-style stepping: per timestep, agents in dynamic priority order pick
// the best admissible move toward their targets with priority inheritance
// and backtracking. Cannot accept external paths. Incomplete; absent when
// the step budget or deadline runs out.
SolveResult parallel_solve(const GridMap& map, const std::vector<AgentTask>& tasks,
                           std::span<const int> blocked_cells, Deadline deadline);

struct Conflict {
  enum class Kind { Vertex, Swap };
  Kind kind = Kind::Vertex;
  int agent_a = 0;        // instance agent id
  int agent_b = 0;        // agent id, or external path index when b_external
  bool b_external = false;
  int time = 0;
  int cell_a = 0;  // vertex: the shared cell; swap: a's source cell
  int cell_b = 0;  // swap: b's source cell
};

// Every vertex conflict (same cell, same timestep) and swap conflict
// (exchanged cells between t and t+1) among the solution's paths and against
// the external paths, with target parking applied. Paths violating the Path
// invariants raise std::invalid_argument naming the offending timestep.
std::vector<Conflict> validate_solution(const GridMap& map,
                                        const std::vector<AgentTask>& tasks,
                                        const Solution& solution,
                                        const ExternalConstraint* external = nullptr);

}  // namespace lamapf
