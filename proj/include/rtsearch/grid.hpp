#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rtsearch {

inline constexpr double kSqrt2 = 1.4142135623730951;

struct Cell {
  int x = 0;  // column
  int y = 0;  // row
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Occupancy grid, row-major, immutable after parsing.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // 1 = passable
  std::string id;

  int index(Cell c) const { return c.y * width + c.x; }
  Cell cell_at(int idx) const { return Cell{idx % width, idx / width}; }
  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool passable(Cell c) const { return in_bounds(c) && cells[index(c)] != 0; }
  int cell_count() const { return width * height; }
  std::size_t passable_count() const;

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width == b.width && a.height == b.height && a.cells == b.cells;
  }
};

struct SearchProblem {
  std::shared_ptr<const GridMap> map;
  Cell start;
  Cell goal;
  std::optional<double> optimal_cost;  // h*(start) when known
};

// map / scenario file errors
struct MalformedHeader : std::runtime_error {
  explicit MalformedHeader(const std::string& m) : std::runtime_error(m) {}
};
struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct MalformedEntry : std::runtime_error {
  explicit MalformedEntry(const std::string& m) : std::runtime_error(m) {}
};
struct OutOfBounds : std::runtime_error {
  explicit OutOfBounds(const std::string& m) : std::runtime_error(m) {}
};
struct BlockedEndpoint : std::runtime_error {
  explicit BlockedEndpoint(const std::string& m) : std::runtime_error(m) {}
};
struct InsufficientCells : std::runtime_error {
  explicit InsufficientCells(const std::string& m) : std::runtime_error(m) {}
};

// Grid-map file format: four header lines (`type octile`, `height H`,
// `width W`, `map`) followed by H rows of W characters. `.` and `G` are
// passable, everything else is blocked. LF or CRLF line ends accepted;
// whitespace inside a row is rejected.
GridMap parse_map(std::string_view text, std::string id = "");
std::string serialize_map(const GridMap& map);

// Edge model: 8-connected, cardinal cost 1, diagonal cost sqrt(2). A
// diagonal step is allowed only when both adjacent cardinal cells are
// passable (no corner cutting). Deterministic order: clockwise from north.
struct Step {
  Cell to;
  double cost;
};
std::vector<Step> neighbors(const GridMap& map, Cell s);

// Callback form used by the hot loops; same order as neighbors().
template <typename Fn>
void for_each_neighbor(const GridMap& map, Cell s, Fn&& fn) {
  static constexpr int dx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  static constexpr int dy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  for (int k = 0; k < 8; ++k) {
    const Cell t{s.x + dx[k], s.y + dy[k]};
    if (!map.passable(t)) continue;
    const bool diagonal = (k & 1) != 0;
    if (diagonal) {
      if (!map.passable(Cell{s.x + dx[k], s.y}) ||
          !map.passable(Cell{s.x, s.y + dy[k]}))
        continue;
    }
    fn(t, diagonal ? kSqrt2 : 1.0);
  }
}

// Octile distance: sqrt(2)*min(dx,dy) + |dx-dy|.
inline double octile_h0(Cell a, Cell b) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return kSqrt2 * std::min(dx, dy) + std::abs(dx - dy);
}

// n random problems with distinct passable endpoints and the goal reachable
// from the start; deterministic for a fixed seed.
std::vector<SearchProblem> random_problems(std::shared_ptr<const GridMap> map,
                                           int n, std::uint64_t seed);

// Connected-component labels under the edge model above; -1 for blocked.
std::vector<int> connected_components(const GridMap& map);

// `# key=value` comment lines carried at the head of scenario and CSV files
// so every output records its invocation and seed.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Scenario files: optional `# key=value` lines, a `version` line, then one
// whitespace-separated entry per problem: bucket, map name, map width,
// map height, start x, start y, goal x, goal y, optimal length.
std::vector<SearchProblem> parse_scenario(std::string_view text,
                                          std::shared_ptr<const GridMap> map,
                                          Metadata* metadata = nullptr);
std::string serialize_scenario(const std::vector<SearchProblem>& problems,
                               const Metadata& metadata = {});

}  // namespace rtsearch
