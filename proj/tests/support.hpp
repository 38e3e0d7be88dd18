#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lamapf/connectivity.hpp"
#include "lamapf/grid.hpp"
#include "lamapf/solvers.hpp"

namespace lamapf::test {

// Builds a 2-D map from rows of '.'/'@' characters; rows are y, columns x.
GridMap ascii_map(const std::vector<std::string>& rows);

// A small instance realizing the two-free-group topology used throughout the
// tests: agent 0 can only reach its target through agent 1's target node,
// agent 1 and agent 2 route through free groups alone.
//
//   0s  A  A  1t  @        A, B: free grid groups
//   @   @  @  B   @
//   1s  B  B  B   0t
//   @   2s @  2t  @
Instance fig2_instance();

// Deterministic xorshift-style generator for test data.
struct TestRng {
  uint64_t state;
  explicit TestRng(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
  uint64_t next();
  int below(int n);  // [0, n)
  double unit();
};

// Random connected-ish map: obstacles dropped at `density`, then tasks are
// sampled from the largest free component so every agent pair is reachable.
GridMap random_map(TestRng& rng, int width, int height, double density);
std::optional<Instance> random_instance(TestRng& rng, int width, int height,
                                        double density, int agents);

// Exhaustive simple-path existence between an agent's endpoints in the
// connectivity graph under the same traversability rules as the search.
bool enumeration_path_exists(const ConnectivityGraph& graph, int agent,
                             const std::vector<int>& available,
                             const std::vector<int>& avoid);

// Best (distinct other agents, node count) over all simple paths, or nullopt.
std::optional<std::pair<int, int>> enumeration_best_objective(
    const ConnectivityGraph& graph, int agent, const std::vector<int>& available,
    const std::vector<int>& avoid);

// Joint-state BFS over full move combinations with vertex/swap filtering.
// Ground truth for small instances: returns the optimal makespan (number of
// timesteps), or nullopt when the instance is unsolvable.
std::optional<int> joint_state_bfs(const GridMap& map,
                                   const std::vector<AgentTask>& tasks,
                                   const std::vector<int>& blocked_cells = {});

// Exhaustive space-time search for one agent against fixed constraint paths:
// minimal arrival time (path length - 1), or nullopt.
std::optional<int> single_agent_spacetime_oracle(const GridMap& map, int start,
                                                 int goal,
                                                 const std::vector<Path>& constraints);

}  // namespace lamapf::test
