#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "rtsearch/evolution.hpp"
#include "rtsearch/harness.hpp"
#include "rtsearch/oracle.hpp"
#include "testutil.hpp"

using namespace rtsearch;

namespace {

std::vector<SearchProblem> desk_suite(int n, std::uint64_t seed) {
  const auto map = testutil::random_map(12, 12, 0.2, seed);
  auto problems = random_problems(map, n, seed + 1);
  resolve_optimal(problems);
  return problems;
}

}  // namespace

TEST_CASE("random_gene respects degenerate ranges") {
  GeneRanges pinned;
  pinned.w = {2, 2};
  pinned.da = {2, 2};
  pinned.lop = {1, 1};
  pinned.lookahead = {7, 7};
  pinned.method = {2, 2};
  Rng rng(0);
  const Gene g = random_gene(pinned, rng);
  CHECK(g.w == 2.0);
  CHECK(g.da == true);
  CHECK(g.lop == Lop::Min);
  CHECK(g.lookahead == 7);
  CHECK(g.method == LookaheadMethod::Greedy);
}

TEST_CASE("random_gene is deterministic per seed and stays in range") {
  GeneRanges ranges;
  Rng a(99), b(99);
  for (int i = 0; i < 200; ++i) {
    const Gene ga = random_gene(ranges, a);
    const Gene gb = random_gene(ranges, b);
    CHECK(ga == gb);
    CHECK(ga.w >= 1.0);
    CHECK(ga.w <= 3.0);
    CHECK(ga.lookahead >= 2);
    CHECK(ga.lookahead <= 80);
  }
}

TEST_CASE("random_gene lookahead covers its range uniformly") {
  // 10^4 draws; rounding gives the end bins half the width of inner bins.
  // chi-square critical value at p = 0.01 with 78 degrees of freedom.
  constexpr double kCrit = 109.958069;
  GeneRanges ranges;
  Rng rng(123);
  std::map<int, int> counts;
  const int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) ++counts[random_gene(ranges, rng).lookahead];

  for (int v = 2; v <= 80; ++v) {
    INFO("lookahead value ", v);
    CHECK(counts[v] > 0);
  }
  double chi2 = 0;
  for (int v = 2; v <= 80; ++v) {
    const double width = (v == 2 || v == 80) ? 0.5 : 1.0;
    const double expected = kDraws * width / 78.0;
    const double d = counts[v] - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < kCrit);
}

TEST_CASE("crossover picks each block from a parent") {
  GeneRanges ranges;
  Rng rng(5);
  const Gene a = random_gene(ranges, rng);
  SUBCASE("identical parents breed themselves") {
    Rng r2(1);
    CHECK(crossover(a, a, r2) == a);
  }
  SUBCASE("every block comes from one of the parents") {
    for (int i = 0; i < 300; ++i) {
      const Gene b = random_gene(ranges, rng);
      const Gene c = crossover(a, b, rng);
      CHECK((c.w == a.w || c.w == b.w));
      CHECK((c.da == a.da || c.da == b.da));
      CHECK((c.lop == a.lop || c.lop == b.lop));
      CHECK((c.lookahead == a.lookahead || c.lookahead == b.lookahead));
      CHECK((c.method == a.method || c.method == b.method));
    }
  }
  SUBCASE("deterministic for a fixed seed") {
    Rng r1(7), r2(7), rb(8);
    const Gene b = random_gene(ranges, rb);
    CHECK(crossover(a, b, r1) == crossover(a, b, r2));
  }
}

TEST_CASE("mutate") {
  GeneRanges ranges;
  Rng rng(11);
  const Gene g = random_gene(ranges, rng);
  SUBCASE("rate 0 is the identity") {
    Rng r(3);
    CHECK(mutate(g, ranges, 0.0, {0.5, 20}, r) == g);
  }
  SUBCASE("rate 1 with zero scales keeps w and lookahead") {
    Rng r(3);
    const Gene m = mutate(g, ranges, 1.0, {0.0, 0.0}, r);
    CHECK(m.w == g.w);
    CHECK(m.lookahead == g.lookahead);
    // the two-valued blocks flip at rate 1
    CHECK(m.da == !g.da);
    CHECK(m.lop != g.lop);
    CHECK(m.method != g.method);
  }
  SUBCASE("mutants never escape the ranges") {
    Rng r(13);
    Gene cur = g;
    for (int i = 0; i < 1000; ++i) {
      cur = mutate(cur, ranges, 0.8, {0.5, 25}, r);
      CHECK(cur.w >= 1.0);
      CHECK(cur.w <= 3.0);
      CHECK(cur.lookahead >= 2);
      CHECK(cur.lookahead <= 80);
    }
  }
}

TEST_CASE("fitness") {
  const auto suite = desk_suite(8, 31);
  SUBCASE("an unsolvable setup scores the cutoff exactly") {
    // force every run to get stuck: sealed pocket with lookahead beyond it
    const auto map = testutil::map_from(testutil::fixture_sealed_pocket());
    std::vector<SearchProblem> stuck{
        {map, {1, 1}, {0, 0}, octile_h0({1, 1}, {0, 0})}};
    Gene g;
    g.lookahead = 10;
    CHECK(fitness(g, stuck, 1000) == 1000.0);
  }
  SUBCASE("a full-lookahead gene is optimal") {
    Gene g;
    g.w = 1;
    g.lop = Lop::Min;
    g.da = false;
    g.lookahead = 12 * 12;
    g.method = LookaheadMethod::AStar;
    CHECK(fitness(g, suite, 1000) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("singleton suite equals that problem's alpha") {
    Gene g;
    g.lookahead = 4;
    const std::vector<SearchProblem> one{suite.front()};
    const auto metrics = run_suite(g, one, 1000);
    CHECK(fitness(g, one, 1000) == metrics[0].alpha);
  }
}

TEST_CASE("evolve") {
  const auto suite = desk_suite(6, 57);
  GeneRanges ranges;
  EvolutionConfig cfg;
  cfg.population_size = 8;
  cfg.generations = 4;
  cfg.cutoff = 1000;
  cfg.seed = 21;

  SUBCASE("a single generation logs the ranked initial population") {
    EvolutionConfig one = cfg;
    one.generations = 1;
    const auto log = evolve(one, ranges, suite);
    REQUIRE(log.generations.size() == 1);
    const auto& ranked = log.generations[0].ranked;
    REQUIRE(ranked.size() == 8);
    for (std::size_t i = 1; i < ranked.size(); ++i)
      CHECK(ranked[i - 1].fitness <= ranked[i].fitness);
  }

  SUBCASE("identical seeds give byte-identical logs") {
    const auto a = evolve(cfg, ranges, suite);
    const auto b = evolve(cfg, ranges, suite);
    CHECK(serialize_evolution_log(a) == serialize_evolution_log(b));
  }

  SUBCASE("elitism keeps best-so-far non-increasing and genes in range") {
    for (std::uint64_t seed : {1, 2, 3}) {
      EvolutionConfig c = cfg;
      c.seed = seed;
      const auto log = evolve(c, ranges, suite);
      REQUIRE(log.generations.size() == 4);
      double prev = kInf;
      for (const auto& gen : log.generations) {
        CHECK(gen.best_so_far <= prev);
        CHECK(gen.ranked.front().fitness >= gen.best_so_far);
        prev = gen.best_so_far;
        for (const auto& rec : gen.ranked) {
          CHECK(rec.gene.w >= 1.0);
          CHECK(rec.gene.w <= 3.0);
          CHECK(rec.gene.lookahead >= 2);
          CHECK(rec.gene.lookahead <= 80);
        }
      }
    }
  }

  SUBCASE("config validation") {
    EvolutionConfig bad = cfg;
    bad.elite_count = 8;
    CHECK_THROWS_AS(evolve(bad, ranges, suite), std::invalid_argument);
    bad = cfg;
    bad.mutation_rate = 1.5;
    CHECK_THROWS_AS(evolve(bad, ranges, suite), std::invalid_argument);
    bad = cfg;
    bad.problems_per_agent = 100;
    CHECK_THROWS_AS(evolve(bad, ranges, suite), std::invalid_argument);
  }
}

TEST_CASE("a high-lookahead gene beats its low-lookahead twin") {
  // directional check on a desk-scale suite
  const auto map = testutil::random_map(16, 16, 0.25, 8);
  auto suite = random_problems(map, 30, 9);
  resolve_optimal(suite);
  Gene best;
  best.w = 1.19;
  best.lop = Lop::Min;
  best.da = true;
  best.lookahead = 59;
  best.method = LookaheadMethod::AStar;
  Gene shallow = best;
  shallow.lookahead = 3;
  CHECK(fitness(best, suite, 1000) <= fitness(shallow, suite, 1000));
}

TEST_CASE("evolution log serialization carries every record") {
  const auto suite = desk_suite(4, 71);
  EvolutionConfig cfg;
  cfg.population_size = 4;
  cfg.generations = 2;
  cfg.seed = 5;
  const auto log = evolve(cfg, GeneRanges{}, suite);
  const std::string text =
      serialize_evolution_log(log, {{"suite", "unit"}});
  CHECK(text.find("# seed=5\n") != std::string::npos);
  CHECK(text.find("# suite=unit\n") != std::string::npos);
  CHECK(text.find("generation,gene,w,lop,da,lookahead,method,fitness,"
                  "mean_tau,solve_rate\n") != std::string::npos);
  // one line per gene per generation plus metadata and header
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 2 + 1 + 4 * 2);
}
