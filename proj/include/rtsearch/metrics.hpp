#pragma once

#include <stdexcept>
#include <vector>

#include "rtsearch/search.hpp"

namespace rtsearch {

struct EmptyInput : std::invalid_argument {
  explicit EmptyInput(const std::string& m) : std::invalid_argument(m) {}
};

// Per-problem outcome in metric form.
struct ProblemMetrics {
  double alpha = 0;        // travel / h*, or the cutoff for unsolved runs
  double tau = 0;          // total visits / distinct visited
  bool solved = false;
  double travel_cost = 0;
  double hstar = 0;
  RunStatus status = RunStatus::Stuck;
  long long steps = 0;
  long long episodes = 0;
};

// Suboptimality: travel / hstar for solved runs, the cutoff otherwise.
// hstar = 0 only when start = goal, which scores 1.
double suboptimality(const RunResult& result, double hstar, double cutoff);

// Scrubbing complexity: average visits per distinct cell entered.
double scrubbing(const RunResult& result);

ProblemMetrics make_metrics(const RunResult& result, double hstar,
                            double cutoff);

struct Summary {
  std::size_t n = 0;
  double mean_alpha = 0, mean_tau = 0, solve_rate = 0;
  double p50_alpha = 0, p95_alpha = 0;
  double p50_tau = 0, p95_tau = 0;
};

// Means are computed over sorted copies so the summary is exactly
// permutation-invariant; percentiles use the nearest-rank rule.
Summary aggregate(const std::vector<ProblemMetrics>& metrics);

}  // namespace rtsearch
