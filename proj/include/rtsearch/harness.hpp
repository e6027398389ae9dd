#pragma once

#include <string>
#include <vector>

#include "rtsearch/gene.hpp"
#include "rtsearch/grid.hpp"
#include "rtsearch/metrics.hpp"

namespace rtsearch {

// Fills in optimal_cost for every problem (offline oracle); throws
// std::invalid_argument if some goal is unreachable.
void resolve_optimal(std::vector<SearchProblem>& problems, int jobs = 1);

// One run per problem, results in input order regardless of the degree of
// concurrency. Every problem must carry a resolved optimal cost.
std::vector<ProblemMetrics> run_suite(const Gene& gene,
                                      const std::vector<SearchProblem>& problems,
                                      double cutoff, int jobs = 1);

struct SweepSpec {
  Gene base;
  std::string block = "lookahead";
  std::vector<double> values;
  std::vector<SearchProblem> suite;
  double cutoff = 1000;
  int jobs = 1;
};

struct SweepRow {
  double value = 0;
  Summary summary;
};

// One row per swept value, the same suite reused for each.
std::vector<SweepRow> sweep(const SweepSpec& spec);

}  // namespace rtsearch
