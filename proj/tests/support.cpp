#include "support.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace lamapf::test {

GridMap ascii_map(const std::vector<std::string>& rows) {
  int height = static_cast<int>(rows.size());
  int width = static_cast<int>(rows[0].size());
  std::vector<uint8_t> passable(static_cast<size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[y].size()) != width)
      throw std::invalid_argument("ascii_map: ragged rows");
    for (int x = 0; x < width; ++x)
      passable[static_cast<size_t>(y) * width + x] = rows[y][x] == '.' ? 1 : 0;
  }
  return GridMap({width, height}, std::move(passable));
}

Instance fig2_instance() {
  GridMap map = ascii_map({
      "....@",
      "@@@.@",
      ".....",
      "@.@.@",
  });
  std::vector<AgentTask> tasks{
      {0, Coord{0, 0}, Coord{4, 2}},
      {1, Coord{0, 2}, Coord{3, 0}},
      {2, Coord{1, 3}, Coord{3, 3}},
  };
  return Instance(std::move(map), std::move(tasks));
}

uint64_t TestRng::next() {
  state ^= state << 13;
  state ^= state >> 7;
  state ^= state << 17;
  return state;
}

int TestRng::below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

double TestRng::unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }

GridMap random_map(TestRng& rng, int width, int height, double density) {
  std::vector<uint8_t> passable(static_cast<size_t>(width) * height, 1);
  for (auto& c : passable)
    if (rng.unit() < density) c = 0;
  return GridMap({width, height}, std::move(passable));
}

namespace {

std::vector<int> largest_component(const GridMap& map) {
  std::vector<int> comp(map.cell_count(), -1);
  std::vector<int> best;
  std::array<int, 2 * kMaxDims> nb;
  int next_id = 0;
  for (int c = 0; c < map.cell_count(); ++c) {
    if (!map.is_passable(c) || comp[c] >= 0) continue;
    std::vector<int> cells;
    std::deque<int> queue{c};
    comp[c] = next_id;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      cells.push_back(u);
      int cnt = map.neighbor_cells(u, nb);
      for (int i = 0; i < cnt; ++i)
        if (map.is_passable(nb[i]) && comp[nb[i]] < 0) {
          comp[nb[i]] = next_id;
          queue.push_back(nb[i]);
        }
    }
    if (cells.size() > best.size()) best = std::move(cells);
    ++next_id;
  }
  return best;
}

}  // namespace

std::optional<Instance> random_instance(TestRng& rng, int width, int height,
                                        double density, int agents) {
  GridMap map = random_map(rng, width, height, density);
  std::vector<int> cells = largest_component(map);
  if (static_cast<int>(cells.size()) < 2 * agents + 1) return std::nullopt;
  // partial Fisher-Yates over the component cells
  for (int i = 0; i < 2 * agents; ++i) {
    int j = i + rng.below(static_cast<int>(cells.size()) - i);
    std::swap(cells[i], cells[j]);
  }
  std::vector<AgentTask> tasks;
  for (int a = 0; a < agents; ++a)
    tasks.push_back(AgentTask{a, map.coord_of(cells[2 * a]), map.coord_of(cells[2 * a + 1])});
  return Instance(std::move(map), std::move(tasks));
}

namespace {

bool node_allowed(const ConnectivityGraph& graph, int agent, int node,
                  const std::vector<int>& available, const std::vector<int>& avoid) {
  const ConnNode& n = graph.node(node);
  if (n.kind == ConnNode::Kind::Free || n.ref == agent) return true;
  for (int a : avoid)
    if (a == n.ref) return false;
  if (available.empty()) return true;
  for (int a : available)
    if (a == n.ref) return true;
  return false;
}

void enumerate_paths(const ConnectivityGraph& graph, int agent, int node, int goal,
                     const std::vector<int>& available, const std::vector<int>& avoid,
                     std::vector<uint8_t>& on_path, std::set<int>& visited_agents,
                     int length, const std::function<void(int, int)>& report) {
  if (node == goal) {
    report(static_cast<int>(visited_agents.size()), length);
    return;
  }
  for (int v : graph.adjacent(node)) {
    if (on_path[v] || !node_allowed(graph, agent, v, available, avoid)) continue;
    on_path[v] = 1;
    const ConnNode& n = graph.node(v);
    bool added = false;
    if (n.kind != ConnNode::Kind::Free && n.ref != agent)
      added = visited_agents.insert(n.ref).second;
    enumerate_paths(graph, agent, v, goal, available, avoid, on_path, visited_agents,
                    length + 1, report);
    if (added) visited_agents.erase(n.ref);
    on_path[v] = 0;
  }
}

}  // namespace

bool enumeration_path_exists(const ConnectivityGraph& graph, int agent,
                             const std::vector<int>& available,
                             const std::vector<int>& avoid) {
  return enumeration_best_objective(graph, agent, available, avoid).has_value();
}

std::optional<std::pair<int, int>> enumeration_best_objective(
    const ConnectivityGraph& graph, int agent, const std::vector<int>& available,
    const std::vector<int>& avoid) {
  int start = graph.start_node(agent), goal = graph.target_node(agent);
  std::vector<uint8_t> on_path(graph.node_count(), 0);
  on_path[start] = 1;
  std::set<int> visited;
  std::optional<std::pair<int, int>> best;
  enumerate_paths(graph, agent, start, goal, available, avoid, on_path, visited, 1,
                  [&](int agents, int nodes) {
                    std::pair<int, int> obj{agents, nodes};
                    if (!best || obj < *best) best = obj;
                  });
  return best;
}

std::optional<int> joint_state_bfs(const GridMap& map,
                                   const std::vector<AgentTask>& tasks,
                                   const std::vector<int>& blocked_cells) {
  const int n = static_cast<int>(tasks.size());
  std::vector<uint8_t> blocked(map.cell_count(), 0);
  for (int c : blocked_cells) blocked[c] = 1;

  auto encode = [&](const std::vector<int>& pos) {
    int64_t key = 0;
    for (int p : pos) key = key * map.cell_count() + p;
    return key;
  };
  std::vector<int> start(n), goal(n);
  for (int i = 0; i < n; ++i) {
    start[i] = map.index_of(tasks[i].start);
    goal[i] = map.index_of(tasks[i].target);
    if (!map.is_passable(start[i]) || blocked[start[i]] || blocked[goal[i]])
      return std::nullopt;
  }

  std::map<int64_t, int> dist;
  std::deque<std::vector<int>> queue{start};
  dist[encode(start)] = 0;
  std::array<int, 2 * kMaxDims> nb;
  while (!queue.empty()) {
    std::vector<int> pos = queue.front();
    queue.pop_front();
    int d = dist[encode(pos)];
    if (pos == goal) return d;

    // all per-agent move options, then the cartesian product with filters
    std::vector<std::vector<int>> options(n);
    for (int i = 0; i < n; ++i) {
      options[i].push_back(pos[i]);
      int cnt = map.neighbor_cells(pos[i], nb);
      for (int c = 0; c < cnt; ++c)
        if (map.is_passable(nb[c]) && !blocked[nb[c]]) options[i].push_back(nb[c]);
    }
    std::vector<int> pick(n, 0), next(n);
    while (true) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        next[i] = options[i][pick[i]];
        for (int j = 0; j < i && ok; ++j) {
          if (next[j] == next[i]) ok = false;                      // vertex
          if (next[i] == pos[j] && next[j] == pos[i]) ok = false;  // swap
        }
      }
      if (ok) {
        int64_t key = encode(next);
        if (!dist.count(key)) {
          dist[key] = d + 1;
          queue.push_back(next);
        }
      }
      int i = 0;
      while (i < n && ++pick[i] == static_cast<int>(options[i].size())) pick[i++] = 0;
      if (i == n) break;
    }
  }
  return std::nullopt;
}

std::optional<int> single_agent_spacetime_oracle(const GridMap& map, int start,
                                                 int goal,
                                                 const std::vector<Path>& constraints) {
  int t_static = 0;
  for (const Path& p : constraints) t_static = std::max(t_static, p.length());
  auto occupied = [&](int cell, int t) {
    for (const Path& p : constraints)
      if (p.at(t) == cell) return true;
    return false;
  };
  auto swap_with = [&](int u, int v, int t) {
    for (const Path& p : constraints)
      if (p.at(t) == v && p.at(t + 1) == u) return true;
    return false;
  };
  int last_goal_busy = -1;
  for (const Path& p : constraints)
    for (int t = 0; t + 1 < p.length(); ++t)
      if (p.cells[t] == goal) last_goal_busy = std::max(last_goal_busy, t);
  for (const Path& p : constraints)
    if (p.cells.back() == goal) return std::nullopt;

  // Beyond t_cap the constraints are all parked, so states collapse there.
  const int t_cap = std::max(t_static, last_goal_busy + 1);
  const int horizon = t_cap + 2 * map.free_count();
  if (occupied(start, 0)) return std::nullopt;
  std::set<std::pair<int, int>> seen{{start, 0}};
  std::deque<std::pair<int, int>> queue{{start, 0}};
  std::array<int, 2 * kMaxDims> nb;
  while (!queue.empty()) {
    auto [cell, t] = queue.front();
    queue.pop_front();
    if (cell == goal && t > last_goal_busy) return t;
    if (t + 1 > horizon) continue;
    int cnt = map.neighbor_cells(cell, nb);
    nb[cnt++] = cell;
    for (int i = 0; i < cnt; ++i) {
      int v = nb[i];
      if (!map.is_passable(v) || occupied(v, t + 1)) continue;
      if (v != cell && swap_with(cell, v, t)) continue;
      if (seen.insert({v, std::min(t + 1, t_cap)}).second) queue.push_back({v, t + 1});
    }
  }
  return std::nullopt;
}

}  // namespace lamapf::test
