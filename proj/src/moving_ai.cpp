#include "lamapf/moving_ai.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace lamapf {

namespace {

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& text, int line_no, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(line_no, std::string("expected integer ") + what + ", got \"" + text + "\"");
  return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

}  // namespace

GridMap load_map(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    line = chomp(line);
    ++line_no;
    return true;
  };

  if (!next_line() || line.rfind("type ", 0) != 0) fail(line_no ? line_no : 1, "expected 'type octile' header");
  if (!next_line() || line.rfind("height ", 0) != 0) fail(line_no ? line_no : 2, "expected 'height H'");
  int height = parse_int(line.substr(7), line_no, "height");
  if (!next_line() || line.rfind("width ", 0) != 0) fail(line_no ? line_no : 3, "expected 'width W'");
  int width = parse_int(line.substr(6), line_no, "width");
  if (!next_line() || line != "map") fail(line_no ? line_no : 4, "expected 'map'");
  if (width <= 0 || height <= 0) fail(line_no, "map dimensions must be positive");

  std::vector<uint8_t> passable(static_cast<size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    if (!next_line()) fail(line_no + 1, "unexpected end of map body");
    if (static_cast<int>(line.size()) != width)
      fail(line_no, "row length " + std::to_string(line.size()) + ", expected " +
                        std::to_string(width));
    for (int x = 0; x < width; ++x) {
      char c = line[x];
      if (c == '.' || c == 'G' || c == 'S')
        passable[static_cast<size_t>(y) * width + x] = 1;
      else if (c != '@' && c != 'O' && c != 'T' && c != 'W')
        fail(line_no, std::string("unknown cell character '") + c + "'");
    }
  }
  return GridMap({width, height}, std::move(passable));
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  return load_map(in);
}

void save_map(const GridMap& map, std::ostream& out) {
  if (map.dim_count() != 2)
    throw std::invalid_argument("save_map: only 2-D maps have a file form");
  int width = map.dims()[0], height = map.dims()[1];
  out << "type octile\n"
      << "height " << height << "\n"
      << "width " << width << "\n"
      << "map\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out << (map.is_passable(Coord{x, y}) ? '.' : '@');
    out << '\n';
  }
}

std::vector<ScenRow> load_scenario_rows(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: empty scenario stream");
  ++line_no;
  if (chomp(line).rfind("version", 0) != 0) fail(1, "expected 'version' header");

  std::vector<ScenRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() < 9) fail(line_no, "expected 9 tab-separated fields, got " +
                                        std::to_string(f.size()));
    ScenRow r;
    r.bucket = parse_int(f[0], line_no, "bucket");
    r.map_name = f[1];
    r.width = parse_int(f[2], line_no, "width");
    r.height = parse_int(f[3], line_no, "height");
    r.sx = parse_int(f[4], line_no, "start-x");
    r.sy = parse_int(f[5], line_no, "start-y");
    r.gx = parse_int(f[6], line_no, "goal-x");
    r.gy = parse_int(f[7], line_no, "goal-y");
    try {
      r.optimal_length = std::stod(f[8]);
    } catch (const std::exception&) {
      fail(line_no, "expected numeric optimal length, got \"" + f[8] + "\"");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ScenRow> load_scenario_rows_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return load_scenario_rows(in);
}

std::vector<AgentTask> select_tasks(const std::vector<ScenRow>& rows,
                                    const std::vector<int>& order, int count,
                                    const GridMap& map) {
  if (count <= 0) throw std::invalid_argument("select_tasks: count must be positive");
  std::vector<AgentTask> tasks;
  std::set<Coord> starts, targets;
  for (int idx : order) {
    if (static_cast<int>(tasks.size()) == count) break;
    const ScenRow& r = rows[idx];
    Coord s{r.sx, r.sy}, g{r.gx, r.gy};
    if (!map.in_bounds(s) || !map.in_bounds(g))
      throw std::runtime_error("scenario row " + std::to_string(idx + 1) +
                               ": coordinates out of map bounds");
    if (!map.is_passable(s) || !map.is_passable(g))
      throw std::runtime_error("scenario row " + std::to_string(idx + 1) +
                               ": start or target on unpassable cell");
    // Invariant-violating rows are skipped, not fatal: the next row is taken.
    if (s == g || starts.count(s) || targets.count(g) || targets.count(s) ||
        starts.count(g))
      continue;
    starts.insert(s);
    targets.insert(g);
    tasks.push_back(AgentTask{static_cast<int>(tasks.size()), s, g});
  }
  if (static_cast<int>(tasks.size()) < count)
    throw std::runtime_error("scenario has only " + std::to_string(tasks.size()) +
                             " usable rows, requested " + std::to_string(count));
  return tasks;
}

std::vector<AgentTask> load_scenario(std::istream& in, int count, const GridMap& map) {
  std::vector<ScenRow> rows = load_scenario_rows(in);
  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  return select_tasks(rows, order, count, map);
}

std::vector<AgentTask> load_scenario_file(const std::string& path, int count,
                                          const GridMap& map) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return load_scenario(in, count, map);
}

}  // namespace lamapf
