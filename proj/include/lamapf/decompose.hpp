#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lamapf/connectivity.hpp"
#include "lamapf/grid.hpp"

namespace lamapf {

// An independent agent set: every member has a dependence path visiting only
// members. Agent ids are sorted ascending.
struct Cluster {
  std::vector<int> agents;
};

// A strongly connected component of the solving-order graph, carrying its
// solve rank (levels with equal rank have no mutual order constraint).
struct Level {
  std::vector<int> agents;
  int order = 0;
};

struct StepStats {
  double rate = 1.0;   // max subproblem size / agent count
  int subproblems = 1;
  double ms = 0.0;
};

struct Decomposition {
  ConnectivityGraph graph;
  std::vector<Cluster> initial_clusters;      // after step 1
  std::vector<Cluster> clusters;              // after step 2 (bipartition)
  std::vector<std::vector<Level>> cluster_levels;  // per final cluster, ordered
  std::vector<Level> levels;                  // global solve order, rank 0..L-1
  std::array<StepStats, 3> steps{};
  int agent_count = 0;
};

struct DecomposeOptions {
  int threads = 1;  // 1 = serial reference path; >1 runs search batches under OpenMP
};

// Step 1: each agent's fewest-agents dependence path with no constraints,
// relevance graph, connected components. Throws when some agent has no
// dependence path at all (the instance is unsolvable).
std::vector<Cluster> initial_clusters(const Instance& instance,
                                      const ConnectivityGraph& graph,
                                      const DecomposeOptions& opts = {});

// True iff every member has a dependence path confined to `agents`.
bool is_independent(const std::vector<int>& agents, const ConnectivityGraph& graph);

// Largest connected component of the cluster's unavoidance graph; ties broken
// by smallest contained agent id. Isolated members count as singletons.
std::vector<int> max_unavoidable_set(const std::vector<int>& cluster,
                                     const ConnectivityGraph& graph,
                                     const DecomposeOptions& opts = {});

// Splits an independent cluster into (major, remain); major is independent
// and remain is independent or empty.
std::pair<std::vector<int>, std::vector<int>> bipartition(
    const std::vector<int>& cluster, const ConnectivityGraph& graph,
    const DecomposeOptions& opts = {});

// Steps 1+2: initial clusters, then repeated bipartition until every emitted
// cluster is independent and cannot shrink further.
std::vector<Cluster> decompose_to_clusters(const Instance& instance,
                                           const ConnectivityGraph& graph,
                                           const DecomposeOptions& opts = {});

// Step 3: solving-order graph from cluster-confined paths, levels as its
// strongly connected components, ranked by longest-path layering over the
// condensation and sorted by (rank, smallest agent id).
std::vector<Level> decompose_to_levels(const std::vector<int>& cluster,
                                       const ConnectivityGraph& graph,
                                       const DecomposeOptions& opts = {});

enum class CompareResult { ABetter, BBetter, Equal };

// Sorts both size lists descending and compares lexicographically; the first
// smaller entry wins. Equal iff the multisets match.
CompareResult compare_decompositions(std::vector<int> a, std::vector<int> b);

// Size of the largest subproblem divided by the agent count.
double decomposition_rate(const std::vector<Level>& levels, int agent_count);

// Global level order: clusters sorted by their smallest agent id, each
// cluster's internal level order preserved; ranks reassigned 0..L-1.
std::vector<Level> solve_order(const std::vector<std::vector<Level>>& per_cluster);

// Full pipeline with per-step timing (step 1 includes the connectivity-graph
// build). Deterministic for identical instances regardless of `threads`.
Decomposition decompose_instance(const Instance& instance,
                                 const DecomposeOptions& opts = {});

// One line per step, then one line per level: "rank: [agent ids]".
void write_decomposition_report(const Decomposition& d, std::ostream& out);

// The simplified-scenario certificate: every agent of every level has a grid
// path from start to target avoiding all earlier levels' targets and all
// later levels' starts.
bool decomposition_preserves_solvability(const Instance& instance,
                                         const Decomposition& d);

}  // namespace lamapf
