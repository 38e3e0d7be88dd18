#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamapf/grid.hpp"

namespace lamapf {

// Parse failure in a .map or .scen stream; the message names the line.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// MovingAI .map reader. Grammar: "type octile", "height H", "width W",
// "map", then H rows of W characters. '.'/'G'/'S' are passable,
// '@'/'O'/'T'/'W' unpassable. Produces a 2-D map with dims [W, H];
// cell (x, y) reads row y, column x.
GridMap load_map(std::istream& in);
GridMap load_map_file(const std::string& path);

// Canonical .map writer ('.'/'@' cells). load_map(save_map(m)) round-trips
// byte-identically for files produced here. 2-D maps only.
void save_map(const GridMap& map, std::ostream& out);

struct ScenRow {
  int bucket = 0;
  std::string map_name;
  int width = 0, height = 0;
  int sx = 0, sy = 0, gx = 0, gy = 0;
  double optimal_length = 0.0;
};

// MovingAI .scen reader: "version ..." header, then tab-separated rows.
std::vector<ScenRow> load_scenario_rows(std::istream& in);
std::vector<ScenRow> load_scenario_rows_file(const std::string& path);

// Converts rows (taken in the given order) into tasks with ids 0..count-1.
// Rows that would break the instance invariant (duplicate start/target,
// start equal to some target) are skipped and the next row is taken.
// Out-of-bounds or unpassable cells and too few usable rows are errors.
std::vector<AgentTask> select_tasks(const std::vector<ScenRow>& rows,
                                    const std::vector<int>& order, int count,
                                    const GridMap& map);

// First `count` usable rows of a scenario stream, in file order.
std::vector<AgentTask> load_scenario(std::istream& in, int count, const GridMap& map);
std::vector<AgentTask> load_scenario_file(const std::string& path, int count,
                                          const GridMap& map);

}  // namespace lamapf
