// Regenerates the benchmark fixtures under data/: deterministic maps in the
// style of the classic MAPF benchmark families plus matching .scen files
// sampled from each map's largest free component.

#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "lamapf/bench.hpp"
#include "lamapf/grid.hpp"
#include "lamapf/moving_ai.hpp"

using namespace lamapf;

namespace {

GridMap empty_map(int w, int h) {
  return GridMap({w, h}, std::vector<uint8_t>(static_cast<size_t>(w) * h, 1));
}

// Width-2 corridor maze on a period-3 lattice. Doors carved along a seeded
// spanning tree of the 2x2 corridor blocks; mixing one- and two-cell doors
// tunes the passable count exactly.
GridMap maze_map(int w, int h, int target_free, uint64_t seed) {
  const int bw = (w + 1) / 3, bh = (h + 1) / 3;  // corridor blocks per axis
  std::vector<uint8_t> cells(static_cast<size_t>(w) * h, 0);
  int base = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x % 3 != 2 && y % 3 != 2) {
        cells[static_cast<size_t>(y) * w + x] = 1;
        ++base;
      }

  // seeded depth-first spanning tree over the block grid
  struct Door {
    int x0, y0, x1, y1;  // the two candidate wall cells
  };
  std::vector<Door> doors;
  std::vector<uint8_t> visited(static_cast<size_t>(bw) * bh, 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  uint64_t state = seed;
  while (!stack.empty()) {
    int b = stack.back();
    int bx = b % bw, by = b / bw;
    int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    // deterministic shuffle of the four directions
    for (int i = 3; i > 0; --i) {
      int j = static_cast<int>(splitmix64(state) % (i + 1));
      std::swap(dirs[i][0], dirs[j][0]);
      std::swap(dirs[i][1], dirs[j][1]);
    }
    bool advanced = false;
    for (auto& d : dirs) {
      int nx = bx + d[0], ny = by + d[1];
      if (nx < 0 || ny < 0 || nx >= bw || ny >= bh) continue;
      int nb = ny * bw + nx;
      if (visited[nb]) continue;
      visited[nb] = 1;
      if (d[0] != 0) {  // horizontal door in wall column
        int wx = 3 * std::min(bx, nx) + 2;
        doors.push_back(Door{wx, 3 * by, wx, 3 * by + 1});
      } else {
        int wy = 3 * std::min(by, ny) + 2;
        doors.push_back(Door{3 * bx, wy, 3 * bx + 1, wy});
      }
      stack.push_back(nb);
      advanced = true;
      break;
    }
    if (!advanced) stack.pop_back();
  }

  int extra = target_free - base;
  int wide = extra - static_cast<int>(doors.size());  // doors that get both cells
  if (wide < 0 || wide > static_cast<int>(doors.size()))
    throw std::runtime_error("maze_map: target free count out of reach");
  for (size_t i = 0; i < doors.size(); ++i) {
    const Door& d = doors[i];
    cells[static_cast<size_t>(d.y0) * w + d.x0] = 1;
    if (static_cast<int>(i) < wide) cells[static_cast<size_t>(d.y1) * w + d.x1] = 1;
  }
  return GridMap({w, h}, std::move(cells));
}

GridMap random_map(int w, int h, double density, uint64_t seed) {
  std::vector<uint8_t> cells(static_cast<size_t>(w) * h, 1);
  uint64_t state = seed;
  for (auto& c : cells)
    if ((splitmix64(state) >> 11) * 0x1.0p-53 < density) c = 0;
  return GridMap({w, h}, std::move(cells));
}

// Square rooms separated by walls with one seeded door per shared wall.
GridMap room_map(int w, int h, int room, uint64_t seed) {
  const int pitch = room + 1;
  std::vector<uint8_t> cells(static_cast<size_t>(w) * h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x % pitch == room || y % pitch == room)
        cells[static_cast<size_t>(y) * w + x] = 0;
  uint64_t state = seed;
  auto span = [&](int origin, int limit) {
    int lo = origin, hi = std::min(origin + room - 1, limit - 1);
    return std::pair<int, int>{lo, hi};
  };
  for (int wy = room; wy < h; wy += pitch)  // horizontal walls: door per room column
    for (int rx = 0; rx < w; rx += pitch) {
      auto [lo, hi] = span(rx, w);
      if (lo > hi || wy + 1 >= h) continue;
      int door = lo + static_cast<int>(splitmix64(state) % (hi - lo + 1));
      cells[static_cast<size_t>(wy) * w + door] = 1;
    }
  for (int wx = room; wx < w; wx += pitch)  // vertical walls
    for (int ry = 0; ry < h; ry += pitch) {
      auto [lo, hi] = span(ry, h);
      if (lo > hi || wx + 1 >= w) continue;
      int door = lo + static_cast<int>(splitmix64(state) % (hi - lo + 1));
      cells[static_cast<size_t>(door) * w + wx] = 1;
    }
  return GridMap({w, h}, std::move(cells));
}

// City-block pattern: a jittered grid of rectangular buildings with streets
// at least two cells wide between them.
GridMap city_map(int size, uint64_t seed) {
  const int pitch = 13;
  std::vector<uint8_t> cells(static_cast<size_t>(size) * size, 1);
  uint64_t state = seed;
  for (int by = 0; by * pitch + 11 < size; ++by)
    for (int bx = 0; bx * pitch + 11 < size; ++bx) {
      int x0 = bx * pitch + 2 + static_cast<int>(splitmix64(state) % 3) - 1;
      int y0 = by * pitch + 2 + static_cast<int>(splitmix64(state) % 3) - 1;
      int bw = 6 + static_cast<int>(splitmix64(state) % 3);
      int bh = 6 + static_cast<int>(splitmix64(state) % 3);
      for (int y = y0; y < y0 + bh; ++y)
        for (int x = x0; x < x0 + bw; ++x)
          cells[static_cast<size_t>(y) * size + x] = 0;
    }
  return GridMap({size, size}, std::move(cells));
}

GridMap fig2_map() {
  std::vector<std::string> rows{"....@", "@@@.@", ".....", "@.@.@"};
  std::vector<uint8_t> cells;
  for (const std::string& r : rows)
    for (char c : r) cells.push_back(c == '.' ? 1 : 0);
  return GridMap({5, 4}, std::move(cells));
}

std::vector<int> largest_component(const GridMap& map) {
  std::vector<int> comp(map.cell_count(), -1), best;
  std::array<int, 2 * kMaxDims> nb;
  int id = 0;
  for (int c = 0; c < map.cell_count(); ++c) {
    if (!map.is_passable(c) || comp[c] >= 0) continue;
    std::vector<int> cells;
    std::deque<int> queue{c};
    comp[c] = id;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      cells.push_back(u);
      int cnt = map.neighbor_cells(u, nb);
      for (int i = 0; i < cnt; ++i)
        if (map.is_passable(nb[i]) && comp[nb[i]] < 0) {
          comp[nb[i]] = id;
          queue.push_back(nb[i]);
        }
    }
    if (cells.size() > best.size()) best = std::move(cells);
    ++id;
  }
  return best;
}

void write_scen(const GridMap& map, const std::string& map_name, int rows,
                uint64_t seed, const std::string& path) {
  std::vector<int> cells = largest_component(map);
  if (static_cast<int>(cells.size()) < 2 * rows)
    throw std::runtime_error(map_name + ": component too small for " +
                             std::to_string(rows) + " rows");
  std::vector<int> perm = seeded_permutation(static_cast<int>(cells.size()), seed);
  std::ofstream out(path);
  out << "version 1\n";
  for (int i = 0; i < rows; ++i) {
    int s = cells[perm[2 * i]], g = cells[perm[2 * i + 1]];
    Coord sc = map.coord_of(s), gc = map.coord_of(g);
    int d = bfs_distance(map, s, g);
    char len[32];
    std::snprintf(len, sizeof len, "%.8f", static_cast<double>(d));
    out << i / 10 << '\t' << map_name << '\t' << map.dims()[0] << '\t' << map.dims()[1]
        << '\t' << sc[0] << '\t' << sc[1] << '\t' << gc[0] << '\t' << gc[1] << '\t'
        << len << '\n';
  }
}

void emit(const GridMap& map, const std::string& name, int scen_rows, uint64_t seed,
          const std::filesystem::path& dir) {
  std::ofstream out(dir / (name + ".map"));
  save_map(map, out);
  write_scen(map, name + ".map", scen_rows, seed, (dir / (name + ".scen")).string());
  std::cout << name << ": " << map.dims()[0] << "x" << map.dims()[1] << " free "
            << map.free_count() << ", largest component "
            << largest_component(map).size() << ", scen rows " << scen_rows << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  try {
    emit(empty_map(16, 16), "empty-16-16", 100, 11, dir);
    emit(maze_map(32, 32, 666, 5), "maze-32-32-2", 120, 12, dir);
    emit(random_map(32, 32, 0.2, 9), "random-32-32-20", 120, 13, dir);
    emit(room_map(32, 32, 4, 3), "room-32-32-4", 120, 14, dir);
    emit(city_map(256, 21), "Boston_0_256", 420, 15, dir);

    GridMap fig2 = fig2_map();
    {
      std::ofstream out(dir / "fig2.map");
      save_map(fig2, out);
      std::ofstream scen(dir / "fig2.scen");
      scen << "version 1\n"
           << "0\tfig2.map\t5\t4\t0\t0\t4\t2\t6.00000000\n"
           << "0\tfig2.map\t5\t4\t0\t2\t3\t0\t5.00000000\n"
           << "0\tfig2.map\t5\t4\t1\t3\t3\t3\t4.00000000\n";
      std::cout << "fig2: 5x4 free " << fig2.free_count() << ", scen rows 3\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "fixture generation failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
