#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "rtsearch/evolution.hpp"
#include "rtsearch/oracle.hpp"
#include "rtsearch/search.hpp"
#include "testutil.hpp"

using namespace rtsearch;

namespace {

Gene base_gene(int lookahead = 10) {
  Gene g;
  g.w = 1;
  g.lop = Lop::Min;
  g.da = false;
  g.lookahead = lookahead;
  g.method = LookaheadMethod::AStar;
  return g;
}

bool disjoint(const LssResult& lss) {
  std::set<int> open(lss.open.begin(), lss.open.end());
  for (int c : lss.closed)
    if (open.count(c)) return false;
  return true;
}

}  // namespace

TEST_CASE("select_next_expansion orders by method with g then index ties") {
  // ids 0 and 1, h = {5, 4}, g = {1, 3}
  std::vector<double> g{1, 3}, h{5, 4};
  CHECK(select_next_expansion({0, 1}, g, h, LookaheadMethod::Greedy) == 1);
  CHECK(select_next_expansion({0, 1}, g, h, LookaheadMethod::AStar) == 0);

  // exact f tie: f = 6 both, the larger g wins
  g = {1, 3};
  h = {5, 3};
  CHECK(select_next_expansion({0, 1}, g, h, LookaheadMethod::AStar) == 1);

  // full tie: smaller index wins
  g = {2, 2};
  h = {4, 4};
  CHECK(select_next_expansion({0, 1}, g, h, LookaheadMethod::AStar) == 0);
}

TEST_CASE("da_filter") {
  std::vector<double> h0{4, 5, 6};
  SUBCASE("identity before any learning") {
    CHECK(da_filter({0, 1, 2}, h0, h0, 1e-6) ==
          std::vector<int>{0, 1, 2});
  }
  SUBCASE("a raised cell is excluded") {
    std::vector<double> h{4, 5 + 2e-6, 6};
    CHECK(da_filter({0, 1, 2}, h, h0, 1e-6) == std::vector<int>{0, 2});
  }
  SUBCASE("falls back to the unfiltered set when everything is raised") {
    std::vector<double> h{5, 6, 7};
    CHECK(da_filter({0, 1, 2}, h, h0, 1e-6) == std::vector<int>{0, 1, 2});
  }
}

TEST_CASE("generate_lss with lookahead 1 expands only the agent cell") {
  const auto map = testutil::open_map(5, 5);
  AgentState st(map, {2, 2}, {4, 4});
  const auto lss = generate_lss(st, base_gene(1));
  CHECK(lss.expansions == 1);
  CHECK(lss.closed == std::vector<int>{map->index({2, 2})});
  REQUIRE(lss.open.size() == 8);
  for (std::size_t i = 0; i < lss.open.size(); ++i) {
    const Cell c = map->cell_at(lss.open[i]);
    const double expect =
        (c.x != 2 && c.y != 2) ? kSqrt2 : 1.0;  // diagonal vs cardinal
    CHECK(lss.open_g[i] == expect);
  }
  CHECK(disjoint(lss));
}

TEST_CASE("generate_lss stops early when the goal is at hand") {
  const auto map = testutil::map_from(testutil::fixture_3x3_open());
  AgentState st(map, {1, 1}, {2, 2});
  const auto lss = generate_lss(st, base_gene(80));
  CHECK(lss.expansions <= 2);
  CHECK(st.g(map->index({2, 2})) == kSqrt2);
  CHECK(disjoint(lss));
}

TEST_CASE("generate_lss honours the depression filter per iteration") {
  // raise h on the east neighbor beyond th but keep it the f-argmin: with
  // da off it is the second expansion, with da on it is excluded
  const auto setup = [](bool da, AgentState& st, Gene& g) {
    g = base_gene(2);
    g.da = da;
    st.h[st.map->index({3, 2})] += 0.1;
  };
  const int east_id = 5 * 2 + 3;

  auto map = testutil::open_map(5, 5);
  {
    AgentState st(map, {2, 2}, {4, 2});
    Gene g;
    setup(false, st, g);
    const auto lss = generate_lss(st, g);
    REQUIRE(lss.expansions == 2);
    CHECK(std::find(lss.closed.begin(), lss.closed.end(), east_id) !=
          lss.closed.end());
  }
  {
    AgentState st(map, {2, 2}, {4, 2});
    Gene g;
    setup(true, st, g);
    const auto lss = generate_lss(st, g);
    REQUIRE(lss.expansions == 2);
    CHECK(std::find(lss.closed.begin(), lss.closed.end(), east_id) ==
          lss.closed.end());
  }
}

TEST_CASE("update_heuristics backs up through the frontier") {
  // one closed cell between two frontier cells, costs 1 each
  const auto map = testutil::map_from(testutil::fixture_corridor_1x4());
  const Cell goal{3, 0};

  auto run = [&](double w, double ha, double hb) {
    AgentState st(map, {1, 0}, goal);
    LssResult lss;
    lss.closed = {map->index({1, 0})};
    lss.open = {map->index({0, 0}), map->index({2, 0})};
    lss.open_g = {1, 1};
    st.h[map->index({0, 0})] = ha;
    st.h[map->index({2, 0})] = hb;
    Gene g = base_gene();
    g.w = w;
    update_heuristics(lss, st, g);
    return st.h[map->index({1, 0})];
  };

  CHECK(run(1, 4, 6) == 5.0);   // min backup: 1 + 4
  CHECK(run(2, 4, 6) == 10.0);  // weighted: 2 * (1 + 4)
}

TEST_CASE("update_heuristics never touches the goal") {
  const auto map = testutil::map_from(testutil::fixture_3x3_open());
  AgentState st(map, {0, 0}, {1, 1});
  const auto lss = generate_lss(st, base_gene(9));
  const int gi = map->index({1, 1});
  // force the goal into the closed set if the episode ended before that
  LssResult forced = lss;
  if (std::find(forced.closed.begin(), forced.closed.end(), gi) ==
      forced.closed.end()) {
    forced.closed.push_back(gi);
    std::sort(forced.closed.begin(), forced.closed.end());
    forced.open.erase(
        std::remove(forced.open.begin(), forced.open.end(), gi),
        forced.open.end());
    forced.open_g.resize(forced.open.size());
  }
  update_heuristics(forced, st, base_gene());
  CHECK(st.h[gi] == 0.0);
}

TEST_CASE("lop selects the backup extraction order") {
  // corridor a-b-c-d, b and c closed, frontier a has h=9, frontier d is the
  // goal with h=0
  const auto run = [](Lop lop) {
    const auto map = testutil::map_from(testutil::fixture_corridor_1x4());
    AgentState st(map, {1, 0}, {3, 0});
    LssResult lss;
    lss.closed = {map->index({1, 0}), map->index({2, 0})};
    lss.open = {map->index({0, 0}), map->index({3, 0})};
    lss.open_g = {1, 2};
    st.h[map->index({0, 0})] = 9;
    Gene g;
    g.w = 1;
    g.lop = lop;
    update_heuristics(lss, st, g);
    return std::pair{st.h[map->index({1, 0})], st.h[map->index({2, 0})]};
  };

  // min floods from the goal side: c = 1 + 0, b = 1 + c
  CHECK(run(Lop::Min) == std::pair{2.0, 1.0});
  // max floods from the expensive side first and the closed set empties
  // before the goal side gets a turn: b = 1 + 9, c = 1 + b
  CHECK(run(Lop::Max) == std::pair{10.0, 11.0});
}

TEST_CASE("move_to_best_frontier walks tree pointers") {
  const auto map = testutil::open_map(6, 1);
  AgentState st(map, {0, 0}, {5, 0});

  SUBCASE("single cardinal edge") {
    st.set_parent(map->index({1, 0}), map->index({0, 0}));
    const auto mv = move_to_best_frontier(st, {1, 0});
    CHECK(mv.kind == MoveOutcome::Kind::Moved);
    CHECK(mv.cost == 1.0);
    REQUIRE(mv.path.size() == 2);
    CHECK(st.current == Cell{1, 0});
    CHECK(st.total_visits == 2);
  }

  SUBCASE("three-edge chain updates visits and distance") {
    st.set_parent(map->index({1, 0}), map->index({0, 0}));
    st.set_parent(map->index({2, 0}), map->index({1, 0}));
    st.set_parent(map->index({3, 0}), map->index({2, 0}));
    const auto mv = move_to_best_frontier(st, {3, 0});
    CHECK(mv.kind == MoveOutcome::Kind::Moved);
    CHECK(mv.cost == 3.0);
    CHECK(st.distance_traveled == 3.0);
    CHECK(st.steps == 3);
    CHECK(st.total_visits == 4);
    CHECK(st.distinct_visited == 4);
    CHECK(st.visit[map->index({1, 0})] == 1);
    CHECK(st.visit[map->index({2, 0})] == 1);
    CHECK(st.visit[map->index({3, 0})] == 1);
  }
}

TEST_CASE("move_to_best_frontier detects constructed cycles") {
  const auto map = testutil::open_map(4, 4);
  AgentState st(map, {0, 0}, {3, 3});
  // x -> y -> z -> x, all neighbors, plus an entry into the current cell
  const int x = map->index({2, 2}), y = map->index({2, 1}),
            z = map->index({1, 1});
  st.set_parent(x, y);
  st.set_parent(y, z);
  st.set_parent(z, x);
  st.set_parent(map->index({1, 0}), map->index({0, 0}));
  const double before = st.distance_traveled;
  const auto mv = move_to_best_frontier(st, {2, 2});
  CHECK(mv.kind == MoveOutcome::Kind::CycleDetected);
  CHECK(st.distance_traveled == before);  // no partial movement
  CHECK(st.current == Cell{0, 0});
  CHECK(st.total_visits == 1);
}

TEST_CASE("move_to_best_frontier repairs a missing current pointer") {
  const auto map = testutil::open_map(3, 1);
  AgentState st(map, {0, 0}, {2, 0});
  // target's chain exists but nothing points at the current cell yet;
  // the walk only terminates because repair points (1,0) at (0,0)
  st.set_parent(map->index({2, 0}), map->index({1, 0}));
  const auto mv = move_to_best_frontier(st, {2, 0});
  CHECK(mv.kind == MoveOutcome::Kind::Moved);
  CHECK(st.parent[map->index({1, 0})] == map->index({0, 0}));
  CHECK(mv.cost == 2.0);
}

TEST_CASE("move_to_best_frontier fails cleanly with no tree at all") {
  const auto map = testutil::open_map(3, 1);
  AgentState st(map, {0, 0}, {2, 0});
  const auto mv = move_to_best_frontier(st, {2, 0});
  CHECK(mv.kind == MoveOutcome::Kind::RepairFailed);
}

TEST_CASE("solve handles start equal to goal") {
  const auto map = testutil::open_map(3, 3);
  SearchProblem p{map, {1, 1}, {1, 1}, 0.0};
  const auto r = solve(p, base_gene(), 1000, 0);
  CHECK(r.status == RunStatus::Solved);
  CHECK(r.travel_cost == 0.0);
  CHECK(r.steps == 0);
  CHECK(r.total_visits == 1);
  CHECK(r.distinct_visited == 1);
}

TEST_CASE("solve crosses the open corridor optimally") {
  const auto map = testutil::map_from(testutil::fixture_corridor_1x4());
  SearchProblem p{map, {0, 0}, {3, 0}, std::nullopt};
  const auto hstar = optimal_cost(p);
  REQUIRE(hstar == 3.0);  // oracle gives h* = 3
  const auto r = solve(p, base_gene(10), 1000, *hstar);
  CHECK(r.status == RunStatus::Solved);
  CHECK(r.travel_cost == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.total_visits == r.steps + 1);
}

TEST_CASE("solve reports Stuck when the first frontier empties") {
  const auto map = testutil::map_from(testutil::fixture_sealed_pocket());
  SearchProblem p{map, {1, 1}, {0, 0}, std::nullopt};
  // the goal cell is passable but sealed off; the pocket has 4 cells, so a
  // lookahead beyond that exhausts the frontier in the first episode
  const auto r = solve(p, base_gene(10), 1000, octile_h0({1, 1}, {0, 0}));
  CHECK(r.status == RunStatus::Stuck);
  const auto again = solve(p, base_gene(10), 1000, octile_h0({1, 1}, {0, 0}));
  CHECK(again.status == RunStatus::Stuck);
  CHECK(again.episodes == r.episodes);
}

TEST_CASE("solve on an open room always succeeds") {
  const auto map = testutil::map_from(testutil::fixture_3x3_open());
  SearchProblem p{map, {1, 1}, {2, 2}, std::nullopt};
  const auto hstar = optimal_cost(p);
  REQUIRE(hstar.has_value());
  const auto r = solve(p, base_gene(2), 1000, *hstar);
  CHECK(r.status == RunStatus::Solved);
  const auto r2 = solve(p, base_gene(2), 1000, *hstar);
  CHECK(r2.status == r.status);
  CHECK(r2.travel_cost == r.travel_cost);
  CHECK(r2.episodes == r.episodes);
}

TEST_CASE("solve cuts off against the travel budget") {
  const auto map = testutil::random_map(12, 12, 0.25, 3);
  const auto problems = random_problems(map, 5, 21);
  for (const auto& p : problems) {
    const auto hstar = optimal_cost(p);
    REQUIRE(hstar.has_value());
    Gene g = base_gene(2);
    const auto r = solve(p, g, 1.0, *hstar);  // cutoff 1: barely any slack
    if (r.status == RunStatus::CutOff) {
      // overran by at most one movement, loosely bounded by the map size
      CHECK(r.travel_cost <= *hstar + map->cell_count() * kSqrt2);
    }
  }
}

TEST_CASE("compounded weighted backups saturate instead of overflowing") {
  // w=3 lets h grow geometrically inside a depression; the backup must keep
  // relaxing at the ceiling rather than losing inf-vs-inf comparisons
  const auto map = testutil::random_map(32, 32, 0.33, 31337);
  auto problems = random_problems(map, 50, 5150);
  const auto& p = problems[3];
  const auto hstar = optimal_cost(p);
  REQUIRE(hstar.has_value());
  Gene g;
  g.w = 3;
  g.lop = Lop::Max;
  g.da = true;
  g.lookahead = 10;
  g.method = LookaheadMethod::AStar;
  const auto r = solve(p, g, 1000.0, *hstar);
  CHECK(r.status == RunStatus::Solved);
  CHECK(r.episodes > 100);
}

TEST_CASE("fuzzed runs keep the core invariants") {
  // per-episode assertions across random problems and genes
  Rng rng(2024);
  GeneRanges ranges;
  int episodes_checked = 0;
  for (int iter = 0; iter < 150; ++iter) {
    const auto map = testutil::random_map(14, 14, 0.22, 1000 + iter);
    auto problems = random_problems(map, 1, 500 + iter);
    auto& p = problems[0];
    const auto hstar = optimal_cost(p);
    REQUIRE(hstar.has_value());
    Gene g = random_gene(ranges, rng);
    if (iter % 3 == 0) {  // exercise the Dijkstra fixpoint settings too
      g.w = 1;
      g.lop = Lop::Min;
      g.da = false;
    }

    AgentState st(p.map, p.start, p.goal);
    const int goal_idx = map->index(p.goal);
    const double budget = 1000.0 * *hstar;
    bool done = false;
    while (!done) {
      const auto lss = generate_lss(st, g);
      ++episodes_checked;
      REQUIRE(lss.expansions <= g.lookahead);
      REQUIRE(disjoint(lss));
      const int root = map->index(st.current);
      for (int c : lss.closed)
        if (c != root) REQUIRE(st.parent[c] >= 0);
      if (lss.open.empty()) break;
      const std::vector<double> before_h = st.h;
      const int target = pick_move_target(lss, st);
      update_heuristics(lss, st, g);
      REQUIRE(st.h[goal_idx] == 0.0);
      if (g.lop == Lop::Min) {
        // learning monotonicity: no non-goal cell drops below its
        // pre-episode value
        for (int i = 0; i < map->cell_count(); ++i)
          if (i != goal_idx) REQUIRE(st.h[i] >= before_h[i] - 1e-9);
      }
      if (g.w == 1 && g.lop == Lop::Min) {
        // Dijkstra fixpoint inside the LSS
        std::set<int> inside(lss.closed.begin(), lss.closed.end());
        inside.insert(lss.open.begin(), lss.open.end());
        for (int c : lss.closed) {
          if (c == goal_idx) continue;
          double best = kInf;
          for_each_neighbor(*map, map->cell_at(c), [&](Cell t, double cost) {
            if (inside.count(map->index(t)))
              best = std::min(best, cost + st.h[map->index(t)]);
          });
          REQUIRE(st.h[c] == doctest::Approx(best).epsilon(1e-9));
        }
      }
      const auto mv = move_to_best_frontier(st, map->cell_at(target));
      REQUIRE(mv.kind == MoveOutcome::Kind::Moved);
      if (st.current == p.goal || st.distance_traveled > budget) done = true;
    }

    const auto r = solve(p, g, 1000.0, *hstar);
    if (r.status == RunStatus::Solved) {
      REQUIRE(r.total_visits == r.steps + 1);
      REQUIRE(r.travel_cost / *hstar >= 1.0 - 1e-9);
    }
  }
  CHECK(episodes_checked > 300);
}
