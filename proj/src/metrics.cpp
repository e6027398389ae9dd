#include "rtsearch/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rtsearch {

double suboptimality(const RunResult& result, double hstar, double cutoff) {
  if (result.status != RunStatus::Solved) return cutoff;
  if (hstar <= 0) return 1.0;
  return result.travel_cost / hstar;
}

double scrubbing(const RunResult& result) {
  return static_cast<double>(result.total_visits) /
         static_cast<double>(result.distinct_visited);
}

ProblemMetrics make_metrics(const RunResult& result, double hstar,
                            double cutoff) {
  ProblemMetrics m;
  m.alpha = suboptimality(result, hstar, cutoff);
  m.tau = scrubbing(result);
  m.solved = result.status == RunStatus::Solved;
  m.travel_cost = result.travel_cost;
  m.hstar = hstar;
  m.status = result.status;
  m.steps = result.steps;
  m.episodes = result.episodes;
  return m;
}

namespace {

double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto n = sorted.size();
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

Summary aggregate(const std::vector<ProblemMetrics>& metrics) {
  if (metrics.empty()) throw EmptyInput("aggregate over an empty suite");
  std::vector<double> alphas, taus;
  alphas.reserve(metrics.size());
  taus.reserve(metrics.size());
  std::size_t solved = 0;
  for (const auto& m : metrics) {
    alphas.push_back(m.alpha);
    taus.push_back(m.tau);
    if (m.solved) ++solved;
  }
  Summary s;
  s.n = metrics.size();
  s.mean_alpha = sorted_mean(alphas);
  s.mean_tau = sorted_mean(taus);
  s.solve_rate = static_cast<double>(solved) / static_cast<double>(s.n);
  std::sort(alphas.begin(), alphas.end());
  std::sort(taus.begin(), taus.end());
  s.p50_alpha = nearest_rank(alphas, 0.50);
  s.p95_alpha = nearest_rank(alphas, 0.95);
  s.p50_tau = nearest_rank(taus, 0.50);
  s.p95_tau = nearest_rank(taus, 0.95);
  return s;
}

}  // namespace rtsearch
