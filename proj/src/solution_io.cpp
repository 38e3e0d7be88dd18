#include "lamapf/solution_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lamapf/moving_ai.hpp"

namespace lamapf {

void write_solution(const GridMap& map, const Solution& solution, std::ostream& out) {
  for (const auto& [id, p] : solution.paths) {
    out << id << ':';
    for (int t = 0; t < p.length(); ++t) {
      Coord c = map.coord_of(p.cells[t]);
      out << ' ' << c << '@' << t;
    }
    out << '\n';
  }
}

namespace {

int parse_int_at(const std::string& s, size_t& pos, int line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
  if (ec != std::errc())
    throw ParseError("line " + std::to_string(line_no) + ": expected integer at column " +
                     std::to_string(pos + 1));
  pos = ptr - s.data();
  return value;
}

void expect(const std::string& s, size_t& pos, char c, int line_no) {
  if (pos >= s.size() || s[pos] != c)
    throw ParseError("line " + std::to_string(line_no) + ": expected '" + c +
                     "' at column " + std::to_string(pos + 1));
  ++pos;
}

}  // namespace

Solution read_solution(const GridMap& map, std::istream& in) {
  Solution sol;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    size_t pos = 0;
    int id = parse_int_at(line, pos, line_no);
    expect(line, pos, ':', line_no);
    Path path;
    int t_expected = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos >= line.size()) break;
      expect(line, pos, '(', line_no);
      Coord c;
      for (int a = 0; a < map.dim_count(); ++a) {
        if (a) expect(line, pos, ',', line_no);
        c[a] = parse_int_at(line, pos, line_no);
        ++c.n;
      }
      expect(line, pos, ')', line_no);
      expect(line, pos, '@', line_no);
      int t = parse_int_at(line, pos, line_no);
      if (t != t_expected++)
        throw ParseError("line " + std::to_string(line_no) + ": timestamps must run 0,1,2,...");
      if (!map.in_bounds(c))
        throw ParseError("line " + std::to_string(line_no) + ": coordinate out of bounds");
      path.cells.push_back(map.index_of(c));
    }
    if (path.cells.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty path");
    if (!sol.paths.emplace(id, std::move(path)).second)
      throw ParseError("line " + std::to_string(line_no) + ": duplicate agent id");
  }
  return sol;
}

}  // namespace lamapf
