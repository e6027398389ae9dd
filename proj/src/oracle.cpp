#include "rtsearch/oracle.hpp"

#include <cstdint>
#include <queue>
#include <vector>

#include "rtsearch/search.hpp"

namespace rtsearch {

namespace {

struct HeapEntry {
  double f;
  double g;
  int id;
};
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;  // prefer deeper
    return a.id > b.id;
  }
};

}  // namespace

std::optional<double> optimal_cost(const GridMap& map, Cell start, Cell goal) {
  if (start == goal) return 0.0;
  const int n = map.cell_count();
  const int si = map.index(start), gi = map.index(goal);
  std::vector<double> g(n, kInf);
  std::vector<std::int32_t> cardinals(n, 0), diagonals(n, 0);
  std::vector<std::uint8_t> done(n, 0);

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
  g[si] = 0;
  heap.push({octile_h0(start, goal), 0, si});
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    if (done[top.id] || top.g != g[top.id]) continue;  // stale entry
    if (top.id == gi)
      return cardinals[gi] * 1.0 + diagonals[gi] * kSqrt2;
    done[top.id] = 1;
    const Cell s = map.cell_at(top.id);
    for_each_neighbor(map, s, [&](Cell t, double c) {
      const int ti = map.index(t);
      if (done[ti]) return;
      const double cand = top.g + c;
      if (cand < g[ti]) {
        g[ti] = cand;
        cardinals[ti] = cardinals[top.id] + (c == 1.0 ? 1 : 0);
        diagonals[ti] = diagonals[top.id] + (c == 1.0 ? 0 : 1);
        heap.push({cand + octile_h0(t, goal), cand, ti});
      }
    });
  }
  return std::nullopt;
}

std::optional<double> optimal_cost(const SearchProblem& problem) {
  return optimal_cost(*problem.map, problem.start, problem.goal);
}

}  // namespace rtsearch
