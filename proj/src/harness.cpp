#include "rtsearch/harness.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "rtsearch/oracle.hpp"
#include "rtsearch/search.hpp"

namespace rtsearch {

namespace {

// Runs fn(0..n) across `jobs` threads; each result goes to its own slot, so
// output is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<std::size_t>(jobs, n);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

void resolve_optimal(std::vector<SearchProblem>& problems, int jobs) {
  std::vector<std::string> failures(problems.size());
  parallel_for(problems.size(), jobs, [&](std::size_t i) {
    auto& p = problems[i];
    if (p.optimal_cost) return;
    const auto cost = optimal_cost(p);
    if (!cost)
      failures[i] = "problem " + std::to_string(i) + ": goal unreachable";
    else
      p.optimal_cost = *cost;
  });
  for (const auto& f : failures)
    if (!f.empty()) throw std::invalid_argument(f);
}

std::vector<ProblemMetrics> run_suite(const Gene& gene,
                                      const std::vector<SearchProblem>& problems,
                                      double cutoff, int jobs) {
  for (std::size_t i = 0; i < problems.size(); ++i)
    if (!problems[i].optimal_cost)
      throw std::invalid_argument("problem " + std::to_string(i) +
                                  " has no resolved optimal cost");
  std::vector<ProblemMetrics> out(problems.size());
  parallel_for(problems.size(), jobs, [&](std::size_t i) {
    const auto& p = problems[i];
    const RunResult r = solve(p, gene, cutoff, *p.optimal_cost);
    out[i] = make_metrics(r, *p.optimal_cost, cutoff);
  });
  return out;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.suite.empty()) throw EmptyInput("sweep needs a problem suite");
  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  for (double value : spec.values) {
    const Gene gene = substitute(spec.base, spec.block, value);
    const auto metrics = run_suite(gene, spec.suite, spec.cutoff, spec.jobs);
    rows.push_back({value, aggregate(metrics)});
  }
  return rows;
}

}  // namespace rtsearch
