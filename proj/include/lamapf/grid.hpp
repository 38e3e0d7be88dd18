#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lamapf {

// Upper bound on grid dimensionality. The algorithms are dimension-generic;
// the file loaders only produce 2-D maps.
inline constexpr int kMaxDims = 4;

struct Coord {
  std::array<int32_t, kMaxDims> v{};
  uint8_t n = 0;

  Coord() = default;
  Coord(std::initializer_list<int32_t> xs) {
    for (int32_t x : xs) v[n++] = x;
  }
  static Coord xy(int32_t x, int32_t y) { return Coord{x, y}; }

  int dims() const { return n; }
  int32_t operator[](int i) const { return v[i]; }
  int32_t& operator[](int i) { return v[i]; }

  bool operator==(const Coord&) const = default;
  auto operator<=>(const Coord&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Coord& c);  // "(x,y)"

// Finite N-dimensional grid of passable/unpassable cells. Cells outside the
// bounds count as unpassable. Immutable after construction; safe to share
// across threads.
class GridMap {
 public:
  GridMap(std::vector<int32_t> dims, std::vector<uint8_t> passable);

  int dim_count() const { return static_cast<int>(dims_.size()); }
  const std::vector<int32_t>& dims() const { return dims_; }
  int cell_count() const { return static_cast<int>(passable_.size()); }
  int free_count() const { return free_count_; }

  bool in_bounds(const Coord& c) const;
  bool is_passable(const Coord& c) const;  // false when out of bounds
  bool is_passable(int cell) const { return passable_[cell] != 0; }

  int index_of(const Coord& c) const;
  Coord coord_of(int cell) const;

  // In-bounds 2N-neighborhood as linear indices, unfiltered by passability.
  // `out` must hold at least 2*dim_count() entries; returns the count.
  int neighbor_cells(int cell, std::span<int> out) const;

 private:
  std::vector<int32_t> dims_;
  std::vector<int32_t> strides_;
  std::vector<uint8_t> passable_;
  int free_count_ = 0;
};

// 2N-neighborhood of g: all in-bounds coordinates differing by +-1 on exactly
// one axis. Passability is not filtered here; callers decide.
std::vector<Coord> neighbors(const GridMap& map, const Coord& g);

struct AgentTask {
  int id = 0;
  Coord start;
  Coord target;
};

// A MAPF instance: map plus tasks. The constructor enforces that starts and
// targets are passable, starts are pairwise distinct, targets are pairwise
// distinct, and no start coincides with any target.
struct Instance {
  GridMap map;
  std::vector<AgentTask> tasks;

  Instance(GridMap m, std::vector<AgentTask> t);
  int agent_count() const { return static_cast<int>(tasks.size()); }
};

// BFS distances (in moves) from `source` over passable cells, optionally
// minus `blocked` (bitmask over cells). Unreachable cells get -1.
std::vector<int32_t> bfs_distances(const GridMap& map, int source,
                                   const std::vector<uint8_t>* blocked = nullptr);

// Early-exit variant: length of a shortest passable path between two cells,
// or -1 when disconnected.
int bfs_distance(const GridMap& map, int source, int goal,
                 const std::vector<uint8_t>* blocked = nullptr);

// True iff every agent's start reaches its target over passable cells,
// ignoring all other agents. `threads` > 1 runs the per-agent searches
// concurrently; results are identical to the serial path.
bool is_instance_solvable(const Instance& instance, int threads = 1);

}  // namespace lamapf
