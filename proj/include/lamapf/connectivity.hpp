#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lamapf/grid.hpp"

namespace lamapf {

struct ConnNode {
  enum class Kind { Free, Start, Target };
  Kind kind = Kind::Free;
  int ref = 0;  // free group id, or agent id for Start/Target
};

// Undirected graph over free grid groups plus every agent's start and target
// cells. Node ids: free groups first (in flood-fill discovery order), then
// starts 0..k-1, then targets 0..k-1. Immutable and shareable.
class ConnectivityGraph {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const ConnNode& node(int id) const { return nodes_[id]; }
  const std::vector<int>& adjacent(int id) const { return adj_[id]; }

  int agent_count() const { return agent_count_; }
  int free_group_count() const { return group_count_; }
  int start_node(int agent) const { return group_count_ + agent; }
  int target_node(int agent) const { return group_count_ + agent_count_ + agent; }

  // Node owning a passable cell; -1 for unpassable cells.
  int node_of_cell(int cell) const { return cell_to_node_[cell]; }
  const std::vector<int>& group_cells(int group_id) const { return group_cells_[group_id]; }

  // "0f", "3s", "2t" labels matching the node kind.
  std::string node_label(int id) const;

  friend ConnectivityGraph build_connectivity_graph(const Instance& instance);

 private:
  std::vector<ConnNode> nodes_;
  std::vector<std::vector<int>> adj_;  // sorted, unique, no self loops
  std::vector<int> cell_to_node_;
  std::vector<std::vector<int>> group_cells_;
  int agent_count_ = 0;
  int group_count_ = 0;
};

ConnectivityGraph build_connectivity_graph(const Instance& instance);

// Plain-text adjacency listing: one node label per line, then edge pairs.
void dump_connectivity(const ConnectivityGraph& graph, std::ostream& out);

// A start-to-target walk over connectivity-graph nodes for one agent.
struct DependencePath {
  int agent = 0;
  std::vector<int> nodes;  // first = start node, last = target node
};

// Start/Target nodes of agents other than `owner` that the path visits.
struct AgentVisit {
  int agent = 0;
  ConnNode::Kind kind = ConnNode::Kind::Start;
  bool operator==(const AgentVisit&) const = default;
};
std::vector<AgentVisit> agents_on_path(const ConnectivityGraph& graph,
                                       const DependencePath& path);
// Same, deduplicated to sorted agent ids.
std::vector<int> agents_visited(const ConnectivityGraph& graph,
                                const DependencePath& path);

struct PathQuery {
  // Empty means all agents' nodes are traversable. Otherwise only start and
  // target nodes of listed agents may be entered (free nodes always may).
  std::span<const int> available{};
  // Start AND target nodes of listed agents are forbidden; overrides
  // membership in `available`. Must not contain the searching agent.
  std::span<const int> avoid{};
  // Agents whose visits carry no cost in the search objective. Used by the
  // bipartition repair step; leaves traversability untouched.
  std::span<const int> zero_cost{};
};

// Label-setting best-first search for a dependence path minimizing, in
// lexicographic order, (distinct other agents visited, node count); visits
// to zero-cost agents do not count toward the first component. Labels carry
// their visited-agent set and are pruned by subset dominance, so the optimum
// is exact and constraining the search can never improve the objective.
// Ties break toward lower node ids. The searching agent's own start/target
// nodes are always traversable. Returns nullopt iff no compliant path
// exists. Deterministic.
std::optional<DependencePath> search_dependence_path(const ConnectivityGraph& graph,
                                                     int agent,
                                                     const PathQuery& query = {});

std::optional<DependencePath> search_dependence_path(const ConnectivityGraph& graph,
                                                     int agent,
                                                     std::span<const int> available,
                                                     std::span<const int> avoid);

// Reachability under the same traversability rules, without the objective.
// Equivalent to search_dependence_path(...).has_value() but a plain BFS;
// the decomposition's pairwise tests run on this.
bool dependence_path_exists(const ConnectivityGraph& graph, int agent,
                            std::span<const int> available, std::span<const int> avoid);

}  // namespace lamapf
