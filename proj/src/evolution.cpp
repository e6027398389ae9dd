#include "rtsearch/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rtsearch/csv.hpp"
#include "rtsearch/harness.hpp"

namespace rtsearch {

namespace {

int rounded_draw(Rng& rng, GeneRanges::Range r) {
  return static_cast<int>(std::lround(rng.uniform(r.lo, r.hi)));
}

double clamp(double v, GeneRanges::Range r) {
  return std::min(std::max(v, r.lo), r.hi);
}

}  // namespace

Gene random_gene(const GeneRanges& ranges, Rng& rng) {
  Gene g;
  g.w = rng.uniform(ranges.w.lo, ranges.w.hi);
  g.da = rounded_draw(rng, ranges.da) >= 2;
  g.lop = rounded_draw(rng, ranges.lop) <= 1 ? Lop::Min : Lop::Max;
  g.lookahead = rounded_draw(rng, ranges.lookahead);
  g.method = rounded_draw(rng, ranges.method) <= 1 ? LookaheadMethod::AStar
                                                   : LookaheadMethod::Greedy;
  return g;
}

Gene crossover(const Gene& a, const Gene& b, Rng& rng) {
  Gene child = a;
  if (rng.chance(0.5)) child.w = b.w;
  if (rng.chance(0.5)) child.da = b.da;
  if (rng.chance(0.5)) child.lop = b.lop;
  if (rng.chance(0.5)) child.lookahead = b.lookahead;
  if (rng.chance(0.5)) child.method = b.method;
  return child;
}

Gene mutate(Gene gene, const GeneRanges& ranges, double rate,
            const MutationScale& scale, Rng& rng) {
  if (rng.chance(rate))
    gene.w = clamp(gene.w + rng.uniform(-scale.w, scale.w), ranges.w);
  if (rng.chance(rate)) gene.da = !gene.da;
  if (rng.chance(rate))
    gene.lop = gene.lop == Lop::Min ? Lop::Max : Lop::Min;
  if (rng.chance(rate)) {
    const double stepped =
        gene.lookahead + rng.uniform(-scale.lookahead, scale.lookahead);
    gene.lookahead =
        static_cast<int>(std::lround(clamp(stepped, ranges.lookahead)));
  }
  if (rng.chance(rate))
    gene.method = gene.method == LookaheadMethod::AStar
                      ? LookaheadMethod::Greedy
                      : LookaheadMethod::AStar;
  return gene;
}

double fitness(const Gene& gene, const std::vector<SearchProblem>& problems,
               double cutoff, int jobs) {
  if (problems.empty()) throw EmptyInput("fitness over an empty suite");
  const auto metrics = run_suite(gene, problems, cutoff, jobs);
  double sum = 0;
  for (const auto& m : metrics) sum += m.alpha;
  return sum / static_cast<double>(metrics.size());
}

EvolutionLog evolve(const EvolutionConfig& config, const GeneRanges& ranges,
                    const std::vector<SearchProblem>& problems) {
  if (config.population_size < 1)
    throw std::invalid_argument("population_size must be positive");
  if (config.elite_count >= config.population_size)
    throw std::invalid_argument("elite_count must be below population_size");
  if (config.mutation_rate < 0 || config.mutation_rate > 1)
    throw std::invalid_argument("mutation_rate must be in [0, 1]");
  if (config.generations < 1)
    throw std::invalid_argument("generations must be positive");
  if (problems.empty()) throw EmptyInput("evolve needs a problem suite");
  if (config.problems_per_agent > static_cast<int>(problems.size()))
    throw std::invalid_argument("problems_per_agent exceeds the suite");

  const std::vector<SearchProblem> suite(
      problems.begin(),
      config.problems_per_agent > 0
          ? problems.begin() + config.problems_per_agent
          : problems.end());

  Rng rng(config.seed);
  std::vector<Gene> population;
  population.reserve(config.population_size);
  for (int i = 0; i < config.population_size; ++i)
    population.push_back(random_gene(ranges, rng));

  EvolutionLog log;
  log.seed = config.seed;
  double best_so_far = kInf;

  for (int gen = 0; gen < config.generations; ++gen) {
    std::vector<GeneRecord> records(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      const auto metrics =
          run_suite(population[i], suite, config.cutoff, config.jobs);
      double alpha_sum = 0, tau_sum = 0;
      std::size_t solved = 0;
      for (const auto& m : metrics) {
        alpha_sum += m.alpha;
        tau_sum += m.tau;
        if (m.solved) ++solved;
      }
      const auto n = static_cast<double>(metrics.size());
      records[i] = {population[i], alpha_sum / n, tau_sum / n,
                    static_cast<double>(solved) / n};
    }

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return records[a].fitness < records[b].fitness;
                     });

    GenerationRecord gr;
    gr.generation = gen;
    for (std::size_t idx : order) gr.ranked.push_back(records[idx]);
    best_so_far = std::min(best_so_far, gr.ranked.front().fitness);
    gr.best_so_far = best_so_far;
    log.generations.push_back(std::move(gr));

    if (gen + 1 == config.generations) break;

    // next generation: elites unchanged, offspring by roulette over 1/alpha
    std::vector<Gene> next;
    next.reserve(population.size());
    for (int e = 0; e < config.elite_count; ++e)
      next.push_back(records[order[e]].gene);

    std::vector<double> cumulative(population.size());
    double total = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      total += 1.0 / records[i].fitness;
      cumulative[i] = total;
    }
    auto draw_parent = [&]() {
      const double r = rng.uniform() * total;
      const auto it =
          std::upper_bound(cumulative.begin(), cumulative.end(), r);
      return std::min<std::size_t>(it - cumulative.begin(),
                                   cumulative.size() - 1);
    };
    while (next.size() < population.size()) {
      const Gene& a = population[draw_parent()];
      const Gene& b = population[draw_parent()];
      next.push_back(mutate(crossover(a, b, rng), ranges,
                            config.mutation_rate, config.mutation_scale, rng));
    }
    population = std::move(next);
  }
  return log;
}

std::string serialize_evolution_log(const EvolutionLog& log,
                                    const Metadata& metadata) {
  std::string out;
  out += "# seed=" + std::to_string(log.seed) + "\n";
  for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
  out += "generation,gene,w,lop,da,lookahead,method,fitness,mean_tau,"
         "solve_rate\n";
  for (const auto& gen : log.generations) {
    for (const auto& rec : gen.ranked) {
      const Gene& g = rec.gene;
      out += std::to_string(gen.generation) + "," + format_gene(g) + "," +
             format_double(g.w) + "," + lop_name(g.lop) + "," +
             (g.da ? "on" : "off") + "," + std::to_string(g.lookahead) + "," +
             method_name(g.method) + "," + format_double(rec.fitness) + "," +
             format_double(rec.mean_tau) + "," +
             format_double(rec.solve_rate) + "\n";
    }
  }
  return out;
}

}  // namespace rtsearch
