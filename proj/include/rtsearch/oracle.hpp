#pragma once

#include <optional>

#include "rtsearch/grid.hpp"

namespace rtsearch {

// Exact shortest-path cost under the grid edge model (offline A* with the
// octile heuristic), or nullopt when the goal is unreachable. The returned
// cost is canonical: cardinal and diagonal steps are counted separately and
// combined once, so equal paths compare bit-identically.
std::optional<double> optimal_cost(const GridMap& map, Cell start, Cell goal);
std::optional<double> optimal_cost(const SearchProblem& problem);

}  // namespace rtsearch
