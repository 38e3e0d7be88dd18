#include "lamapf/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace lamapf {

ConnectivityGraph build_connectivity_graph(const Instance& instance) {
  const GridMap& map = instance.map;
  const int k = instance.agent_count();
  ConnectivityGraph g;
  g.agent_count_ = k;
  g.cell_to_node_.assign(map.cell_count(), -1);

  // Start/target cells are their own nodes; -2 marks them during flood fill.
  for (const AgentTask& t : instance.tasks) {
    g.cell_to_node_[map.index_of(t.start)] = -2;
    g.cell_to_node_[map.index_of(t.target)] = -2;
  }

  // Free grid groups: flood fill over passable cells excluding all
  // starts/targets, scanning cells in index order for determinism.
  std::array<int, 2 * kMaxDims> nb;
  for (int c = 0; c < map.cell_count(); ++c) {
    if (!map.is_passable(c) || g.cell_to_node_[c] != -1) continue;
    int gid = g.group_count_++;
    g.group_cells_.emplace_back();
    std::deque<int> queue{c};
    g.cell_to_node_[c] = gid;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      g.group_cells_[gid].push_back(u);
      int cnt = map.neighbor_cells(u, nb);
      for (int i = 0; i < cnt; ++i) {
        int v = nb[i];
        if (!map.is_passable(v) || g.cell_to_node_[v] != -1) continue;
        g.cell_to_node_[v] = gid;
        queue.push_back(v);
      }
    }
    std::sort(g.group_cells_[gid].begin(), g.group_cells_[gid].end());
  }

  g.nodes_.resize(g.group_count_ + 2 * k);
  for (int i = 0; i < g.group_count_; ++i)
    g.nodes_[i] = ConnNode{ConnNode::Kind::Free, i};
  for (int a = 0; a < k; ++a) {
    g.nodes_[g.start_node(a)] = ConnNode{ConnNode::Kind::Start, a};
    g.nodes_[g.target_node(a)] = ConnNode{ConnNode::Kind::Target, a};
    g.cell_to_node_[map.index_of(instance.tasks[a].start)] = g.start_node(a);
    g.cell_to_node_[map.index_of(instance.tasks[a].target)] = g.target_node(a);
  }

  // Edges: two nodes are adjacent iff some cell of one is grid-adjacent to
  // some cell of the other.
  g.adj_.resize(g.nodes_.size());
  for (int c = 0; c < map.cell_count(); ++c) {
    int u = g.cell_to_node_[c];
    if (u < 0) continue;
    int cnt = map.neighbor_cells(c, nb);
    for (int i = 0; i < cnt; ++i) {
      int v = g.cell_to_node_[nb[i]];
      if (v < 0 || v == u) continue;
      g.adj_[u].push_back(v);
    }
  }
  for (auto& list : g.adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

std::string ConnectivityGraph::node_label(int id) const {
  const ConnNode& n = nodes_[id];
  switch (n.kind) {
    case ConnNode::Kind::Free:
      return std::to_string(n.ref) + "f";
    case ConnNode::Kind::Start:
      return std::to_string(n.ref) + "s";
    default:
      return std::to_string(n.ref) + "t";
  }
}

void dump_connectivity(const ConnectivityGraph& graph, std::ostream& out) {
  for (int i = 0; i < graph.node_count(); ++i) out << graph.node_label(i) << '\n';
  for (int i = 0; i < graph.node_count(); ++i)
    for (int j : graph.adjacent(i))
      if (i < j) out << graph.node_label(i) << ' ' << graph.node_label(j) << '\n';
}

std::vector<AgentVisit> agents_on_path(const ConnectivityGraph& graph,
                                       const DependencePath& path) {
  std::vector<AgentVisit> visits;
  for (int id : path.nodes) {
    const ConnNode& n = graph.node(id);
    if (n.kind == ConnNode::Kind::Free || n.ref == path.agent) continue;
    visits.push_back(AgentVisit{n.ref, n.kind});
  }
  std::sort(visits.begin(), visits.end(), [](const AgentVisit& a, const AgentVisit& b) {
    return a.agent != b.agent ? a.agent < b.agent : a.kind < b.kind;
  });
  visits.erase(std::unique(visits.begin(), visits.end()), visits.end());
  return visits;
}

std::vector<int> agents_visited(const ConnectivityGraph& graph,
                                const DependencePath& path) {
  std::vector<int> agents;
  for (const AgentVisit& v : agents_on_path(graph, path)) agents.push_back(v.agent);
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  return agents;
}

namespace {

// Per-agent traversability under a query; free nodes are always traversable
// and the owner's own endpoints always are.
std::vector<uint8_t> agent_permissions(const ConnectivityGraph& graph, int agent,
                                       std::span<const int> available,
                                       std::span<const int> avoid) {
  const int k = graph.agent_count();
  if (agent < 0 || agent >= k)
    throw std::invalid_argument("search_dependence_path: unknown agent");
  std::vector<uint8_t> agent_ok(k, available.empty() ? 1 : 0);
  for (int a : available) agent_ok[a] = 1;
  for (int a : avoid) {
    if (a == agent)
      throw std::invalid_argument("search_dependence_path: agent in its own avoid set");
    agent_ok[a] = 0;
  }
  agent_ok[agent] = 1;
  return agent_ok;
}

struct Label {
  int cost;        // distinct non-zero-cost agents visited
  int node_count;  // path length in nodes
  int node;
  int parent;                // label index, -1 at the source
  std::vector<int> visited;  // sorted distinct other agents on this path
};

struct LabelRef {
  int cost, node_count, node, label;
  bool operator>(const LabelRef& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (node_count != o.node_count) return node_count > o.node_count;
    if (node != o.node) return node > o.node;
    return label > o.label;
  }
};

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() > b.size()) return false;
  size_t j = 0;
  for (int x : a) {
    while (j < b.size() && b[j] < x) ++j;
    if (j == b.size() || b[j] != x) return false;
    ++j;
  }
  return true;
}

}  // namespace

namespace {

// Settle-once greedy: one label per node, priority (agents so far, nodes).
// Always terminates in O(E log V); the returned objective may be above the
// true optimum, but absence still coincides with unreachability.
std::optional<DependencePath> search_greedy(const ConnectivityGraph& graph, int agent,
                                            const std::vector<uint8_t>& agent_ok,
                                            const std::vector<uint8_t>& free_visit) {
  const int source = graph.start_node(agent);
  const int goal = graph.target_node(agent);
  std::vector<uint8_t> done(graph.node_count(), 0);
  std::vector<std::pair<int, int>> best(graph.node_count(), {INT32_MAX, INT32_MAX});
  std::vector<Label> settled;
  std::priority_queue<LabelRef, std::vector<LabelRef>, std::greater<>> open;
  open.push(LabelRef{0, 1, source, -1});
  best[source] = {0, 1};

  while (!open.empty()) {
    LabelRef ref = open.top();
    open.pop();
    if (done[ref.node]) continue;
    done[ref.node] = 1;

    int idx = static_cast<int>(settled.size());
    Label s{ref.cost, ref.node_count, ref.node, ref.label, {}};
    if (ref.label >= 0) s.visited = settled[ref.label].visited;
    const ConnNode& n = graph.node(ref.node);
    if (n.kind != ConnNode::Kind::Free && n.ref != agent) {
      auto it = std::lower_bound(s.visited.begin(), s.visited.end(), n.ref);
      if (it == s.visited.end() || *it != n.ref) s.visited.insert(it, n.ref);
    }
    settled.push_back(std::move(s));

    if (ref.node == goal) {
      DependencePath path;
      path.agent = agent;
      for (int i = idx; i >= 0; i = settled[i].parent) path.nodes.push_back(settled[i].node);
      std::reverse(path.nodes.begin(), path.nodes.end());
      return path;
    }
    for (int v : graph.adjacent(ref.node)) {
      if (done[v]) continue;
      const ConnNode& vn = graph.node(v);
      int cost = ref.cost;
      if (vn.kind != ConnNode::Kind::Free && vn.ref != agent) {
        if (!agent_ok[vn.ref]) continue;
        if (!free_visit[vn.ref] &&
            !std::binary_search(settled[idx].visited.begin(), settled[idx].visited.end(),
                                vn.ref))
          ++cost;
      }
      std::pair<int, int> key{cost, ref.node_count + 1};
      if (key < best[v]) {
        best[v] = key;
        open.push(LabelRef{cost, ref.node_count + 1, v, idx});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<DependencePath> search_dependence_path(const ConnectivityGraph& graph,
                                                     int agent,
                                                     const PathQuery& query) {
  const int k = graph.agent_count();
  std::vector<uint8_t> agent_ok =
      agent_permissions(graph, agent, query.available, query.avoid);
  std::vector<uint8_t> free_visit(k, 0);
  for (int a : query.zero_cost) free_visit[a] = 1;

  const int source = graph.start_node(agent);
  const int goal = graph.target_node(agent);

  // The greedy pass is cheap and yields an upper bound. A zero-cost result
  // is already optimal (the greedy is exact within the zero-cost layer), and
  // on large graphs with big bounds the exact pass below would only burn its
  // budget, so the bound is returned as-is there.
  auto greedy = search_greedy(graph, agent, agent_ok, free_visit);
  if (!greedy) return std::nullopt;
  std::vector<int> distinct;
  for (int id : greedy->nodes) {
    const ConnNode& n = graph.node(id);
    if (n.kind != ConnNode::Kind::Free && n.ref != agent && !free_visit[n.ref])
      distinct.push_back(n.ref);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int bound_cost = static_cast<int>(distinct.size());
  const int bound_nodes = static_cast<int>(greedy->nodes.size());
  if (bound_cost == 0) return greedy;
  if (graph.node_count() > 96 && bound_cost > 4) return greedy;

  // Exact minimum-label pass, pruned by the greedy bound: only labels that
  // could still end strictly below (bound_cost, bound_nodes) survive. Exact
  // minimum-label optimization can blow up combinatorially, so past the
  // label budget the greedy bound stands.
  const size_t label_budget = std::max<size_t>(2048, 32 * graph.node_count());

  std::vector<Label> labels;
  std::vector<std::vector<int>> kept(graph.node_count());  // label ids per node
  std::priority_queue<LabelRef, std::vector<LabelRef>, std::greater<>> open;

  labels.push_back(Label{0, 1, source, -1, {}});
  kept[source].push_back(0);
  open.push(LabelRef{0, 1, source, 0});

  auto dominated = [&](int node, const std::vector<int>& visited, int node_count) {
    for (int id : kept[node]) {
      const Label& l = labels[id];
      if (l.node_count <= node_count && subset_of(l.visited, visited)) return true;
    }
    return false;
  };

  while (!open.empty()) {
    LabelRef ref = open.top();
    open.pop();
    const int idx = ref.label;

    if (labels[idx].node == goal) {
      DependencePath path;
      path.agent = agent;
      for (int i = idx; i >= 0; i = labels[i].parent) path.nodes.push_back(labels[i].node);
      std::reverse(path.nodes.begin(), path.nodes.end());
      return path;
    }

    for (int v : graph.adjacent(labels[idx].node)) {
      const ConnNode& vn = graph.node(v);
      int cost = labels[idx].cost;
      std::vector<int> visited = labels[idx].visited;
      if (vn.kind != ConnNode::Kind::Free && vn.ref != agent) {
        if (!agent_ok[vn.ref]) continue;
        auto it = std::lower_bound(visited.begin(), visited.end(), vn.ref);
        if (it == visited.end() || *it != vn.ref) {
          visited.insert(it, vn.ref);
          if (!free_visit[vn.ref]) ++cost;
        }
      }
      int node_count = labels[idx].node_count + 1;
      if (cost > bound_cost || (cost == bound_cost && node_count >= bound_nodes))
        continue;
      if (dominated(v, visited, node_count)) continue;
      if (labels.size() >= label_budget) return greedy;
      labels.push_back(Label{cost, node_count, v, idx, std::move(visited)});
      int id = static_cast<int>(labels.size()) - 1;
      kept[v].push_back(id);
      open.push(LabelRef{cost, node_count, v, id});
    }
  }
  return greedy;
}

bool dependence_path_exists(const ConnectivityGraph& graph, int agent,
                            std::span<const int> available, std::span<const int> avoid) {
  std::vector<uint8_t> agent_ok = agent_permissions(graph, agent, available, avoid);
  const int goal = graph.target_node(agent);
  std::vector<uint8_t> seen(graph.node_count(), 0);
  std::vector<int> stack{graph.start_node(agent)};
  seen[stack[0]] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == goal) return true;
    for (int v : graph.adjacent(u)) {
      if (seen[v]) continue;
      const ConnNode& vn = graph.node(v);
      if (vn.kind != ConnNode::Kind::Free && vn.ref != agent && !agent_ok[vn.ref]) continue;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

std::optional<DependencePath> search_dependence_path(const ConnectivityGraph& graph,
                                                     int agent,
                                                     std::span<const int> available,
                                                     std::span<const int> avoid) {
  PathQuery q;
  q.available = available;
  q.avoid = avoid;
  return search_dependence_path(graph, agent, q);
}

}  // namespace lamapf
