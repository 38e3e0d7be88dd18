#include "lamapf/solvers.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace lamapf {

int64_t sum_of_costs(const Solution& s) {
  int64_t soc = 0;
  for (const auto& [id, p] : s.paths) soc += p.length();
  return soc;
}

int64_t makespan(const Solution& s) {
  int64_t m = 0;
  for (const auto& [id, p] : s.paths) m = std::max<int64_t>(m, p.length());
  return m;
}

namespace {

bool cells_adjacent(const GridMap& map, int a, int b) {
  std::array<int, 2 * kMaxDims> nb;
  int cnt = map.neighbor_cells(a, nb);
  for (int i = 0; i < cnt; ++i)
    if (nb[i] == b) return true;
  return false;
}

// Reservation view over a growing set of constraint paths: transient
// occupancy at exact timesteps plus permanent parking at each path's end.
struct Reservations {
  explicit Reservations(const GridMap& map) : ncells(map.cell_count()) {}

  void add(const Path* p) {
    int idx = static_cast<int>(paths.size());
    paths.push_back(p);
    int len = p->length();
    for (int t = 0; t + 1 < len; ++t) occ.emplace(key(t, p->cells[t]), idx);
    parked[p->cells.back()] = {len - 1, idx};
    horizon = std::max(horizon, len);
  }

  // Constraint path standing at `cell` at time `t`, or -1.
  int occupant(int cell, int t) const {
    auto it = occ.find(key(t, cell));
    if (it != occ.end()) return it->second;
    auto pk = parked.find(cell);
    if (pk != parked.end() && pk->second.first <= t) return pk->second.second;
    return -1;
  }

  int position(int idx, int t) const { return paths[idx]->at(t); }

  int64_t key(int t, int cell) const { return static_cast<int64_t>(t) * ncells + cell; }

  int ncells;
  int horizon = 0;  // max constraint path length
  std::vector<const Path*> paths;
  std::unordered_map<int64_t, int> occ;
  std::unordered_map<int, std::pair<int, int>> parked;  // cell -> (from, idx)
};

struct AStarNode {
  int cell;
  int t;
  int parent;  // index into the node store
};

struct AStarOpen {
  int f, h, cell, t;
  int node;
  bool operator>(const AStarOpen& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    if (cell != o.cell) return cell > o.cell;
    if (t != o.t) return t > o.t;
    return node > o.node;
  }
};

// Space-time A* for one agent against the reservation set. Time collapses
// once every constraint path is parked, so the state space is bounded by
// cells x (horizon + 1).
std::optional<Path> plan_single(const GridMap& map, int start, int goal,
                                const std::vector<uint8_t>& blocked,
                                const std::vector<int32_t>& dist_to_goal,
                                const Reservations& res, Deadline deadline,
                                bool& timed_out) {
  if (dist_to_goal[start] < 0) return std::nullopt;
  if (res.occupant(start, 0) >= 0) return std::nullopt;
  {
    auto pk = res.parked.find(goal);
    if (pk != res.parked.end()) return std::nullopt;  // goal occupied forever
  }
  int target_busy = -1;  // last transient crossing of the goal cell
  for (const Path* p : res.paths)
    for (int t = 0; t + 1 < p->length(); ++t)
      if (p->cells[t] == goal) target_busy = std::max(target_busy, t);

  const int t_cap = res.horizon;  // beyond this the world is static
  const int64_t max_t = static_cast<int64_t>(res.horizon) + 2 * map.free_count();

  std::vector<AStarNode> nodes;
  std::unordered_map<int64_t, int> best_t;  // collapsed state -> settled marker
  auto state_key = [&](int cell, int t) {
    return static_cast<int64_t>(std::min(t, t_cap)) * map.cell_count() + cell;
  };

  std::priority_queue<AStarOpen, std::vector<AStarOpen>, std::greater<>> open;
  nodes.push_back(AStarNode{start, 0, -1});
  open.push(AStarOpen{dist_to_goal[start], dist_to_goal[start], start, 0, 0});

  std::array<int, 2 * kMaxDims> nb;
  int pops = 0;
  while (!open.empty()) {
    AStarOpen e = open.top();
    open.pop();
    if (++pops % 512 == 0 && deadline.expired()) {
      timed_out = true;
      return std::nullopt;
    }
    auto [it, fresh] = best_t.emplace(state_key(e.cell, e.t), e.t);
    if (!fresh) continue;

    if (e.cell == goal && e.t > target_busy) {
      Path path;
      for (int i = e.node; i >= 0; i = nodes[i].parent) path.cells.push_back(nodes[i].cell);
      std::reverse(path.cells.begin(), path.cells.end());
      return path;
    }

    int t1 = e.t + 1;
    if (t1 > max_t) continue;
    int cnt = map.neighbor_cells(e.cell, nb);
    nb[cnt++] = e.cell;  // wait
    for (int i = 0; i < cnt; ++i) {
      int v = nb[i];
      if (!map.is_passable(v) || blocked[v] || dist_to_goal[v] < 0) continue;
      if (best_t.count(state_key(v, t1))) continue;
      if (res.occupant(v, t1) >= 0) continue;
      if (v != e.cell) {
        int o = res.occupant(v, e.t);
        if (o >= 0 && res.position(o, t1) == e.cell) continue;  // swap
      }
      nodes.push_back(AStarNode{v, t1, e.node});
      open.push(AStarOpen{t1 + dist_to_goal[v], dist_to_goal[v], v, t1,
                          static_cast<int>(nodes.size()) - 1});
    }
  }
  return std::nullopt;
}

std::vector<uint8_t> blocked_mask(const GridMap& map, std::span<const int> blocked_cells) {
  std::vector<uint8_t> mask(map.cell_count(), 0);
  for (int c : blocked_cells) mask[c] = 1;
  return mask;
}

}  // namespace

SolveResult serial_solve(const GridMap& map, const std::vector<AgentTask>& tasks,
                         const ExternalConstraint& external,
                         std::span<const int> blocked_cells, Deadline deadline) {
  SolveResult result;
  std::vector<uint8_t> blocked = blocked_mask(map, blocked_cells);

  // Priority: longest start-to-target distance plans first, ties by id.
  struct Entry {
    int order_dist;
    const AgentTask* task;
  };
  std::vector<Entry> order;
  for (const AgentTask& t : tasks) {
    int d = bfs_distance(map, map.index_of(t.start), map.index_of(t.target), &blocked);
    if (d < 0) return result;
    order.push_back(Entry{d, &t});
  }
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    return a.order_dist != b.order_dist ? a.order_dist > b.order_dist
                                        : a.task->id < b.task->id;
  });

  Reservations res(map);
  for (const Path& p : external.paths) res.add(&p);

  Solution sol;
  std::vector<std::pair<int, Path>> planned;
  planned.reserve(tasks.size());
  for (const Entry& e : order) {
    if (deadline.expired()) {
      result.timed_out = true;
      return result;
    }
    int goal = map.index_of(e.task->target);
    std::vector<int32_t> dist = bfs_distances(map, goal, &blocked);
    auto path = plan_single(map, map.index_of(e.task->start), goal, blocked, dist, res,
                            deadline, result.timed_out);
    if (!path) return result;
    planned.emplace_back(e.task->id, std::move(*path));
    res.add(&planned.back().second);
  }
  for (auto& [id, p] : planned) sol.paths.emplace(id, std::move(p));

  if (!validate_solution(map, tasks, sol, &external).empty())
    throw std::logic_error("serial_solve produced a conflicting solution");
  result.solution = std::move(sol);
  return result;
}

namespace {

struct PibtState {
  const GridMap& map;
  const std::vector<uint8_t>& blocked;
  const std::vector<std::vector<int32_t>>& dist;  // per agent
  std::vector<int>& pos;
  std::vector<int>& next;
  std::vector<int>& occupied_now;   // cell -> agent or -1
  std::vector<int>& occupied_next;  // cell -> agent or -1
};

bool func_pibt(PibtState& s, int i, int parent) {
  std::array<int, 2 * kMaxDims + 1> cand;
  int cnt = s.map.neighbor_cells(s.pos[i], std::span<int>(cand.data(), 2 * kMaxDims));
  cand[cnt++] = s.pos[i];
  std::sort(cand.begin(), cand.begin() + cnt, [&](int a, int b) {
    int da = s.dist[i][a], db = s.dist[i][b];
    return da != db ? da < db : a < b;
  });

  for (int ci = 0; ci < cnt; ++ci) {
    int v = cand[ci];
    if (!s.map.is_passable(v) || s.blocked[v] || s.dist[i][v] < 0) continue;
    if (s.occupied_next[v] >= 0) continue;                 // vertex
    if (parent >= 0 && v == s.pos[parent]) continue;       // swap with pusher
    int j = s.occupied_now[v];
    if (j >= 0 && j != i && s.next[j] >= 0 && s.next[j] == s.pos[i]) continue;  // swap
    s.next[i] = v;
    s.occupied_next[v] = i;
    if (j >= 0 && j != i && s.next[j] < 0) {
      if (!func_pibt(s, j, i)) {
        // the pushed agent overwrote the claim on v by staying; withdraw
        if (s.occupied_next[v] == i) s.occupied_next[v] = -1;
        s.next[i] = -1;
        continue;
      }
    }
    return true;
  }
  s.next[i] = s.pos[i];
  s.occupied_next[s.pos[i]] = i;
  return false;
}

}  // namespace

SolveResult parallel_solve(const GridMap& map, const std::vector<AgentTask>& tasks,
                           std::span<const int> blocked_cells, Deadline deadline) {
  SolveResult result;
  const int n = static_cast<int>(tasks.size());
  std::vector<uint8_t> blocked = blocked_mask(map, blocked_cells);

  std::vector<std::vector<int32_t>> dist(n);
  std::vector<int> pos(n), goal(n);
  for (int i = 0; i < n; ++i) {
    pos[i] = map.index_of(tasks[i].start);
    goal[i] = map.index_of(tasks[i].target);
    dist[i] = bfs_distances(map, goal[i], &blocked);
    if (dist[i][pos[i]] < 0) return result;
  }

  std::vector<std::vector<int>> history(n);
  for (int i = 0; i < n; ++i) history[i].push_back(pos[i]);

  std::vector<int> elapsed(n, 0), next(n, -1);
  std::vector<int> occupied_now(map.cell_count(), -1), occupied_next(map.cell_count(), -1);
  std::vector<int> by_priority(n);
  for (int i = 0; i < n; ++i) by_priority[i] = i;

  const int64_t step_budget = int64_t{10} * map.free_count();
  auto all_done = [&]() {
    for (int i = 0; i < n; ++i)
      if (pos[i] != goal[i]) return false;
    return true;
  };

  for (int64_t step = 0; !all_done(); ++step) {
    if (step >= step_budget) return result;
    if (deadline.expired()) {
      result.timed_out = true;
      return result;
    }
    std::sort(by_priority.begin(), by_priority.end(), [&](int a, int b) {
      return elapsed[a] != elapsed[b] ? elapsed[a] > elapsed[b] : a < b;
    });
    std::fill(next.begin(), next.end(), -1);
    for (int i = 0; i < n; ++i) occupied_now[pos[i]] = i;
    PibtState state{map, blocked, dist, pos, next, occupied_now, occupied_next};
    for (int i : by_priority)
      if (next[i] < 0) func_pibt(state, i, -1);
    for (int i = 0; i < n; ++i) {
      occupied_now[pos[i]] = -1;
      occupied_next[next[i]] = -1;
    }
    for (int i = 0; i < n; ++i) {
      pos[i] = next[i];
      history[i].push_back(pos[i]);
      elapsed[i] = pos[i] == goal[i] ? 0 : elapsed[i] + 1;
    }
  }

  Solution sol;
  for (int i = 0; i < n; ++i) {
    Path p;
    p.cells = std::move(history[i]);
    while (p.cells.size() >= 2 && p.cells.back() == goal[i] &&
           p.cells[p.cells.size() - 2] == goal[i])
      p.cells.pop_back();
    sol.paths.emplace(tasks[i].id, std::move(p));
  }
  if (!validate_solution(map, tasks, sol).empty())
    throw std::logic_error("parallel_solve produced a conflicting solution");
  result.solution = std::move(sol);
  return result;
}

std::vector<Conflict> validate_solution(const GridMap& map,
                                        const std::vector<AgentTask>& tasks,
                                        const Solution& solution,
                                        const ExternalConstraint* external) {
  struct Entry {
    int id;
    bool ext;
    const Path* path;
  };
  std::vector<Entry> entries;
  for (const auto& [id, p] : solution.paths) entries.push_back({id, false, &p});
  if (external)
    for (size_t i = 0; i < external->paths.size(); ++i)
      entries.push_back({static_cast<int>(i), true, &external->paths[i]});

  // Structural checks for the solution's own paths.
  for (const auto& [id, p] : solution.paths) {
    if (p.cells.empty())
      throw std::invalid_argument("agent " + std::to_string(id) + ": empty path");
    const AgentTask* task = nullptr;
    for (const AgentTask& t : tasks)
      if (t.id == id) task = &t;
    if (!task) throw std::invalid_argument("agent " + std::to_string(id) + ": no task");
    if (p.cells.front() != map.index_of(task->start))
      throw std::invalid_argument("agent " + std::to_string(id) +
                                  ": path does not begin at the start (timestep 0)");
    if (p.cells.back() != map.index_of(task->target))
      throw std::invalid_argument("agent " + std::to_string(id) +
                                  ": path does not end at the target (timestep " +
                                  std::to_string(p.length() - 1) + ")");
    for (int t = 0; t < p.length(); ++t) {
      if (!map.is_passable(p.cells[t]))
        throw std::invalid_argument("agent " + std::to_string(id) +
                                    ": unpassable cell at timestep " + std::to_string(t));
      if (t > 0 && p.cells[t] != p.cells[t - 1] &&
          !cells_adjacent(map, p.cells[t - 1], p.cells[t]))
        throw std::invalid_argument("agent " + std::to_string(id) +
                                    ": non-adjacent move at timestep " + std::to_string(t));
    }
  }

  int max_len = 0;
  for (const Entry& e : entries) max_len = std::max(max_len, e.path->length());

  std::vector<Conflict> conflicts;
  std::unordered_map<int, int> at;  // cell -> entry index, rebuilt per timestep
  for (int t = 0; t < max_len; ++t) {
    at.clear();
    for (size_t i = 0; i < entries.size(); ++i) {
      int cell = entries[i].path->at(t);
      auto [it, fresh] = at.emplace(cell, static_cast<int>(i));
      if (!fresh) {
        const Entry& a = entries[it->second];
        const Entry& b = entries[i];
        if (a.ext && b.ext) continue;
        const Entry& in = a.ext ? b : a;
        const Entry& other = a.ext ? a : b;
        conflicts.push_back(Conflict{Conflict::Kind::Vertex, in.id, other.id, other.ext,
                                     t, cell, cell});
      }
    }
    if (t + 1 >= max_len) break;
    for (size_t i = 0; i < entries.size(); ++i) {
      int u = entries[i].path->at(t);
      int v = entries[i].path->at(t + 1);
      if (u == v) continue;
      auto it = at.find(v);
      if (it == at.end() || static_cast<size_t>(it->second) <= i) continue;
      const Entry& b = entries[it->second];
      if (b.path->at(t + 1) != u) continue;
      if (entries[i].ext && b.ext) continue;
      const Entry& in = entries[i].ext ? b : entries[i];
      const Entry& other = entries[i].ext ? entries[i] : b;
      conflicts.push_back(Conflict{Conflict::Kind::Swap, in.id, other.id, other.ext, t,
                                   in.path->at(t), other.path->at(t)});
    }
  }
  return conflicts;
}

}  // namespace lamapf
