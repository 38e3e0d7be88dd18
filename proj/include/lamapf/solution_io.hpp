#pragma once

#include <iosfwd>

#include "lamapf/grid.hpp"
#include "lamapf/solvers.hpp"

namespace lamapf {

// Line-based solution text: one line per agent, "id: (x,y)@t (x,y)@t ...".
void write_solution(const GridMap& map, const Solution& solution, std::ostream& out);

// Parses the format above; coordinates must match the map's dimensionality
// and timestamps must run 0,1,2,... per line.
Solution read_solution(const GridMap& map, std::istream& in);

}  // namespace lamapf
