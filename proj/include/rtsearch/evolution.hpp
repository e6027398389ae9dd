#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rtsearch/gene.hpp"
#include "rtsearch/grid.hpp"
#include "rtsearch/metrics.hpp"
#include "rtsearch/rng.hpp"

namespace rtsearch {

struct MutationScale {
  double w = 0.25;
  double lookahead = 10;
};

struct EvolutionConfig {
  int population_size = 16;
  int generations = 10;
  int problems_per_agent = 0;  // 0 = whole suite
  double cutoff = 1000;
  std::uint64_t seed = 0;
  int elite_count = 1;
  double mutation_rate = 0.3;
  MutationScale mutation_scale;
  int jobs = 1;
};

struct GeneRecord {
  Gene gene;
  double fitness = 0;  // mean suboptimality over the suite
  double mean_tau = 0;
  double solve_rate = 0;
};

struct GenerationRecord {
  int generation = 0;
  std::vector<GeneRecord> ranked;  // ascending fitness
  double best_so_far = 0;
};

struct EvolutionLog {
  std::uint64_t seed = 0;
  std::vector<GenerationRecord> generations;
};

// Fresh gene: w is uniform continuous, the remaining blocks are uniform
// continuous draws rounded to the nearest integer. Draw order is fixed
// (w, da, lop, lookahead, method).
Gene random_gene(const GeneRanges& ranges, Rng& rng);

// Uniform per-block pick from either parent, in the same fixed block order.
Gene crossover(const Gene& a, const Gene& b, Rng& rng);

// Each block independently mutates with the given rate: w and lookahead take
// a uniform step within their scale (then clamp / re-round), the two-valued
// blocks flip.
Gene mutate(Gene gene, const GeneRanges& ranges, double rate,
            const MutationScale& scale, Rng& rng);

// Mean suboptimality over the suite; unsolved runs contribute the cutoff.
double fitness(const Gene& gene, const std::vector<SearchProblem>& problems,
               double cutoff, int jobs = 1);

// Generation 0 is random; afterwards the elite carry over unchanged and the
// rest come from fitness-proportional (1/alpha) selection, crossover and
// mutation. The same problem suite is reused every generation.
EvolutionLog evolve(const EvolutionConfig& config, const GeneRanges& ranges,
                    const std::vector<SearchProblem>& problems);

// Line-delimited records, one per gene per generation:
//   generation,gene,w,lop,da,lookahead,method,fitness,mean_tau,solve_rate
std::string serialize_evolution_log(const EvolutionLog& log,
                                    const Metadata& metadata = {});

}  // namespace rtsearch
