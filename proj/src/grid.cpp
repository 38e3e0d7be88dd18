#include "lamapf/grid.hpp"

#include <deque>
#include <ostream>
#include <set>
#include <stdexcept>

#include "lamapf/exec.hpp"

namespace lamapf {

std::ostream& operator<<(std::ostream& os, const Coord& c) {
  os << '(';
  for (int i = 0; i < c.dims(); ++i) {
    if (i) os << ',';
    os << c[i];
  }
  return os << ')';
}

GridMap::GridMap(std::vector<int32_t> dims, std::vector<uint8_t> passable)
    : dims_(std::move(dims)), passable_(std::move(passable)) {
  if (dims_.size() < 2 || dims_.size() > kMaxDims)
    throw std::invalid_argument("GridMap: dimension count must be in [2, " +
                                std::to_string(kMaxDims) + "]");
  int64_t cells = 1;
  strides_.resize(dims_.size());
  for (size_t a = 0; a < dims_.size(); ++a) {
    if (dims_[a] <= 0) throw std::invalid_argument("GridMap: dims must be positive");
    strides_[a] = static_cast<int32_t>(cells);
    cells *= dims_[a];
  }
  if (cells > (int64_t{1} << 30) || static_cast<int64_t>(passable_.size()) != cells)
    throw std::invalid_argument("GridMap: passable table size mismatch");
  for (uint8_t p : passable_) free_count_ += p ? 1 : 0;
}

bool GridMap::in_bounds(const Coord& c) const {
  if (c.dims() != dim_count()) return false;
  for (int a = 0; a < dim_count(); ++a)
    if (c[a] < 0 || c[a] >= dims_[a]) return false;
  return true;
}

bool GridMap::is_passable(const Coord& c) const {
  return in_bounds(c) && passable_[index_of(c)] != 0;
}

int GridMap::index_of(const Coord& c) const {
  int idx = 0;
  for (int a = 0; a < dim_count(); ++a) idx += c[a] * strides_[a];
  return idx;
}

Coord GridMap::coord_of(int cell) const {
  Coord c;
  c.n = static_cast<uint8_t>(dim_count());
  for (int a = 0; a < dim_count(); ++a) c[a] = (cell / strides_[a]) % dims_[a];
  return c;
}

int GridMap::neighbor_cells(int cell, std::span<int> out) const {
  int cnt = 0;
  for (int a = 0; a < dim_count(); ++a) {
    int x = (cell / strides_[a]) % dims_[a];
    if (x > 0) out[cnt++] = cell - strides_[a];
    if (x + 1 < dims_[a]) out[cnt++] = cell + strides_[a];
  }
  return cnt;
}

std::vector<Coord> neighbors(const GridMap& map, const Coord& g) {
  if (!map.in_bounds(g)) throw std::invalid_argument("neighbors: coordinate out of bounds");
  std::array<int, 2 * kMaxDims> buf;
  int cnt = map.neighbor_cells(map.index_of(g), buf);
  std::vector<Coord> out;
  out.reserve(cnt);
  for (int i = 0; i < cnt; ++i) out.push_back(map.coord_of(buf[i]));
  return out;
}

Instance::Instance(GridMap m, std::vector<AgentTask> t)
    : map(std::move(m)), tasks(std::move(t)) {
  if (tasks.empty()) throw std::invalid_argument("Instance: tasks must be nonempty");
  std::set<Coord> starts, targets;
  for (const AgentTask& task : tasks) {
    if (!map.is_passable(task.start))
      throw std::invalid_argument("Instance: agent " + std::to_string(task.id) +
                                  " start is not a passable cell");
    if (!map.is_passable(task.target))
      throw std::invalid_argument("Instance: agent " + std::to_string(task.id) +
                                  " target is not a passable cell");
    if (!starts.insert(task.start).second)
      throw std::invalid_argument("Instance: duplicate start of agent " +
                                  std::to_string(task.id));
    if (!targets.insert(task.target).second)
      throw std::invalid_argument("Instance: duplicate target of agent " +
                                  std::to_string(task.id));
  }
  for (const AgentTask& task : tasks)
    if (targets.count(task.start) || starts.count(task.target))
      throw std::invalid_argument("Instance: start/target overlap at agent " +
                                  std::to_string(task.id));
}

std::vector<int32_t> bfs_distances(const GridMap& map, int source,
                                   const std::vector<uint8_t>* blocked) {
  std::vector<int32_t> dist(map.cell_count(), -1);
  if (!map.is_passable(source) || (blocked && (*blocked)[source])) return dist;
  std::deque<int> queue{source};
  dist[source] = 0;
  std::array<int, 2 * kMaxDims> nb;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    int cnt = map.neighbor_cells(u, nb);
    for (int i = 0; i < cnt; ++i) {
      int v = nb[i];
      if (dist[v] >= 0 || !map.is_passable(v) || (blocked && (*blocked)[v])) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

int bfs_distance(const GridMap& map, int source, int goal,
                 const std::vector<uint8_t>* blocked) {
  if (source == goal) return map.is_passable(source) ? 0 : -1;
  std::vector<int32_t> dist(map.cell_count(), -1);
  if (!map.is_passable(source) || (blocked && (*blocked)[source])) return -1;
  std::deque<int> queue{source};
  dist[source] = 0;
  std::array<int, 2 * kMaxDims> nb;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    int cnt = map.neighbor_cells(u, nb);
    for (int i = 0; i < cnt; ++i) {
      int v = nb[i];
      if (dist[v] >= 0 || !map.is_passable(v) || (blocked && (*blocked)[v])) continue;
      dist[v] = dist[u] + 1;
      if (v == goal) return dist[v];
      queue.push_back(v);
    }
  }
  return -1;
}

bool is_instance_solvable(const Instance& instance, int threads) {
  const int k = instance.agent_count();
  std::vector<uint8_t> ok(k, 0);
  parallel_for(k, threads, [&](int i) {
    const AgentTask& t = instance.tasks[i];
    ok[i] = bfs_distance(instance.map, instance.map.index_of(t.start),
                         instance.map.index_of(t.target)) >= 0;
  });
  for (uint8_t o : ok)
    if (!o) return false;
  return true;
}

}  // namespace lamapf
