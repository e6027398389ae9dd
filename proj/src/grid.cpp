#include "rtsearch/grid.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <sstream>

#include "rtsearch/rng.hpp"

namespace rtsearch {

std::size_t GridMap::passable_count() const {
  return static_cast<std::size_t>(
      std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

namespace {

// Splits on '\n', dropping one trailing '\r' per line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool parse_int_field(std::string_view s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

int expect_dim_header(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() + 1 || line.substr(0, key.size()) != key ||
      line[key.size()] != ' ')
    throw MalformedHeader("expected '" + std::string(key) +
                          " <n>' header line, got '" + std::string(line) + "'");
  int value = 0;
  if (!parse_int_field(line.substr(key.size() + 1), value) || value < 1)
    throw MalformedHeader("bad " + std::string(key) + " value in '" +
                          std::string(line) + "'");
  return value;
}

}  // namespace

GridMap parse_map(std::string_view text, std::string id) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) throw MalformedHeader("map header truncated");
  if (lines[0] != "type octile")
    throw MalformedHeader("first header line must be 'type octile'");
  GridMap map;
  map.height = expect_dim_header(lines[1], "height");
  map.width = expect_dim_header(lines[2], "width");
  if (lines[3] != "map") throw MalformedHeader("missing 'map' header line");
  map.id = std::move(id);

  const std::size_t body = 4;
  if (lines.size() - body < static_cast<std::size_t>(map.height))
    throw DimensionMismatch("expected " + std::to_string(map.height) +
                            " rows, got " +
                            std::to_string(lines.size() - body));
  for (std::size_t i = body + map.height; i < lines.size(); ++i)
    if (!lines[i].empty())
      throw DimensionMismatch("trailing content after row " +
                              std::to_string(map.height));

  map.cells.reserve(static_cast<std::size_t>(map.width) * map.height);
  for (int y = 0; y < map.height; ++y) {
    std::string_view row = lines[body + y];
    if (row.size() != static_cast<std::size_t>(map.width))
      throw DimensionMismatch("row " + std::to_string(y) + " has width " +
                              std::to_string(row.size()) + ", declared " +
                              std::to_string(map.width));
    for (char c : row) {
      if (c == ' ' || c == '\t')
        throw DimensionMismatch("whitespace in map row " + std::to_string(y));
      map.cells.push_back(c == '.' || c == 'G' ? 1 : 0);
    }
  }
  return map;
}

std::string serialize_map(const GridMap& map) {
  std::string out = "type octile\nheight " + std::to_string(map.height) +
                    "\nwidth " + std::to_string(map.width) + "\nmap\n";
  out.reserve(out.size() +
              static_cast<std::size_t>(map.height) * (map.width + 1));
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x)
      out.push_back(map.cells[map.index({x, y})] ? '.' : '@');
    out.push_back('\n');
  }
  return out;
}

std::vector<Step> neighbors(const GridMap& map, Cell s) {
  std::vector<Step> out;
  out.reserve(8);
  for_each_neighbor(map, s,
                    [&](Cell t, double cost) { out.push_back({t, cost}); });
  return out;
}

std::vector<int> connected_components(const GridMap& map) {
  std::vector<int> comp(map.cell_count(), -1);
  int next_id = 0;
  std::deque<int> queue;
  for (int i = 0; i < map.cell_count(); ++i) {
    if (comp[i] != -1 || !map.cells[i]) continue;
    comp[i] = next_id;
    queue.push_back(i);
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for_each_neighbor(map, map.cell_at(cur), [&](Cell t, double) {
        const int ti = map.index(t);
        if (comp[ti] == -1) {
          comp[ti] = next_id;
          queue.push_back(ti);
        }
      });
    }
    ++next_id;
  }
  return comp;
}

std::vector<SearchProblem> random_problems(std::shared_ptr<const GridMap> map,
                                           int n, std::uint64_t seed) {
  if (map->passable_count() < 2)
    throw InsufficientCells("map has fewer than 2 passable cells");

  const auto comp = connected_components(*map);
  std::vector<int> comp_size;
  for (int c : comp)
    if (c >= 0) {
      if (static_cast<std::size_t>(c) >= comp_size.size())
        comp_size.resize(c + 1, 0);
      ++comp_size[c];
    }

  // cells eligible as endpoints: members of components with >= 2 cells,
  // grouped per component in row-major order
  std::vector<std::vector<int>> members(comp_size.size());
  std::vector<int> eligible;
  for (int i = 0; i < map->cell_count(); ++i)
    if (comp[i] >= 0 && comp_size[comp[i]] >= 2) {
      members[comp[i]].push_back(i);
      eligible.push_back(i);
    }
  if (eligible.empty())
    throw InsufficientCells("no connected pair of passable cells");

  Rng rng(seed);
  std::vector<SearchProblem> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const int start_idx = eligible[rng.bounded(eligible.size())];
    const auto& pool = members[comp[start_idx]];
    // draw the goal from the same component, skipping the start
    std::size_t pick = rng.bounded(pool.size() - 1);
    const auto start_pos = static_cast<std::size_t>(
        std::lower_bound(pool.begin(), pool.end(), start_idx) - pool.begin());
    if (pick >= start_pos) ++pick;
    out.push_back(SearchProblem{map, map->cell_at(start_idx),
                                map->cell_at(pool[pick]), std::nullopt});
  }
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

double parse_double_field(std::string_view s, int line_no) {
  try {
    std::size_t used = 0;
    const std::string tmp(s);
    const double v = std::stod(tmp, &used);
    if (used != tmp.size()) throw std::invalid_argument("trailing chars");
    return v;
  } catch (const std::exception&) {
    throw MalformedEntry("scenario line " + std::to_string(line_no) +
                         ": bad number '" + std::string(s) + "'");
  }
}

}  // namespace

std::vector<SearchProblem> parse_scenario(std::string_view text,
                                          std::shared_ptr<const GridMap> map,
                                          Metadata* metadata) {
  const auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].substr(0, 2) == "# ") {
    if (metadata) {
      const std::string_view body = lines[first].substr(2);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        metadata->emplace_back(std::string(body), "");
      else
        metadata->emplace_back(std::string(body.substr(0, eq)),
                               std::string(body.substr(eq + 1)));
    }
    ++first;
  }
  if (first >= lines.size() || lines[first].substr(0, 7) != "version")
    throw MalformedEntry("scenario must begin with a version line");

  std::vector<SearchProblem> out;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_fields(lines[i]);
    const int line_no = static_cast<int>(i + 1);
    if (f.size() != 9)
      throw MalformedEntry("scenario line " + std::to_string(line_no) +
                           ": expected 9 fields, got " +
                           std::to_string(f.size()));
    int sx, sy, gx, gy;
    if (!parse_int_field(f[4], sx) || !parse_int_field(f[5], sy) ||
        !parse_int_field(f[6], gx) || !parse_int_field(f[7], gy))
      throw MalformedEntry("scenario line " + std::to_string(line_no) +
                           ": bad coordinate");
    const double optimal = parse_double_field(f[8], line_no);
    const Cell start{sx, sy}, goal{gx, gy};
    if (!map->in_bounds(start) || !map->in_bounds(goal))
      throw OutOfBounds("scenario line " + std::to_string(line_no) +
                        ": cell outside the map");
    if (!map->passable(start) || !map->passable(goal))
      throw BlockedEndpoint("scenario line " + std::to_string(line_no) +
                            ": endpoint on a blocked cell");
    // slack covers values stored at 9 significant digits
    const double bound = octile_h0(start, goal);
    if (optimal < bound - (1e-6 + 1e-8 * bound))
      throw MalformedEntry("scenario line " + std::to_string(line_no) +
                           ": optimal length below the octile bound");
    out.push_back(SearchProblem{map, start, goal, optimal});
  }
  return out;
}

std::string serialize_scenario(const std::vector<SearchProblem>& problems,
                               const Metadata& metadata) {
  std::string out;
  for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
  out += "version 1\n";
  char buf[64];
  for (const auto& p : problems) {
    const auto& m = *p.map;
    out += "0\t" + (m.id.empty() ? std::string("map") : m.id) + "\t" +
           std::to_string(m.width) + "\t" + std::to_string(m.height) + "\t" +
           std::to_string(p.start.x) + "\t" + std::to_string(p.start.y) +
           "\t" + std::to_string(p.goal.x) + "\t" + std::to_string(p.goal.y) +
           "\t";
    const double opt = p.optimal_cost.value_or(octile_h0(p.start, p.goal));
    std::snprintf(buf, sizeof buf, "%.9g", opt);
    out += buf;
    out.push_back('\n');
  }
  return out;
}

}  // namespace rtsearch
