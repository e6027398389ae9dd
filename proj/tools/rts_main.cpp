// rts: grid pathfinding runs for a configurable family of real-time
// heuristic search algorithms, plus the experiment harness around them.
//
// Subcommands: solve, oracle, gen-problems, sweep, evolve.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "rtsearch/csv.hpp"
#include "rtsearch/evolution.hpp"
#include "rtsearch/gene.hpp"
#include "rtsearch/grid.hpp"
#include "rtsearch/harness.hpp"
#include "rtsearch/metrics.hpp"
#include "rtsearch/oracle.hpp"
#include "rtsearch/search.hpp"

namespace {

using nlohmann::json;
using namespace rtsearch;

std::string join_invocation(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::uint64_t seed_fallback() {
  if (const char* env = std::getenv("RTS_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

std::shared_ptr<const GridMap> load_map(const std::string& path) {
  return std::make_shared<const GridMap>(
      parse_map(read_file(path), std::filesystem::path(path).stem().string()));
}

Cell parse_cell(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("expected 'x,y', got '" + text + "'");
  try {
    return Cell{std::stoi(text.substr(0, comma)),
                std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("expected 'x,y', got '" + text + "'");
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

struct ProblemSourceOpts {
  std::string scenario;
  int count = 0;
  std::uint64_t problem_seed = 0;
  bool problem_seed_set = false;
};

std::vector<SearchProblem> load_problems(const ProblemSourceOpts& src,
                                         std::shared_ptr<const GridMap> map,
                                         int jobs, Metadata& meta) {
  std::vector<SearchProblem> problems;
  if (!src.scenario.empty()) {
    problems = parse_scenario(read_file(src.scenario), std::move(map));
    meta.emplace_back("scenario", src.scenario);
  } else {
    const std::uint64_t seed =
        src.problem_seed_set ? src.problem_seed : seed_fallback();
    problems = random_problems(std::move(map), src.count, seed);
    meta.emplace_back("problem_seed", std::to_string(seed));
  }
  resolve_optimal(problems, jobs);
  return problems;
}

int run_solve(const std::string& invocation, const std::string& map_path,
              const std::string& start_s, const std::string& goal_s,
              const std::string& scenario, int index,
              const std::string& gene_s, bool unchecked, double cutoff,
              const std::string& out_path) {
  const auto map = load_map(map_path);
  const Gene gene = parse_gene(gene_s, !unchecked);

  SearchProblem problem;
  if (!scenario.empty()) {
    auto problems = parse_scenario(read_file(scenario), map);
    if (index < 0) {
      // whole-suite mode: one CSV row per scenario entry
      resolve_optimal(problems);
      const auto metrics = run_suite(gene, problems, cutoff);
      const Metadata meta{{"invocation", invocation},
                          {"map", map->id},
                          {"gene", format_gene(gene)},
                          {"cutoff", format_double(cutoff)}};
      emit(out_path, serialize_suite_results(metrics, meta));
      return 0;
    }
    if (index >= static_cast<int>(problems.size()))
      throw std::runtime_error("scenario index out of range");
    problem = problems[index];
  } else {
    problem = SearchProblem{map, parse_cell(start_s), parse_cell(goal_s),
                            std::nullopt};
    if (!map->passable(problem.start) || !map->passable(problem.goal))
      throw std::runtime_error("start or goal is not a passable cell");
  }

  std::string hstar_source = "oracle";
  double hstar = 0;
  if (problem.optimal_cost) {
    hstar = *problem.optimal_cost;
    hstar_source = "scenario";
  } else if (const auto cost = optimal_cost(problem)) {
    hstar = *cost;
  } else {
    // unreachable goal: score against the octile bound so the run still
    // reports something meaningful
    hstar = octile_h0(problem.start, problem.goal);
    hstar_source = "octile-bound";
  }

  const RunResult r = solve(problem, gene, cutoff, hstar);
  json out{{"invocation", invocation},
           {"map", map->id},
           {"start", {problem.start.x, problem.start.y}},
           {"goal", {problem.goal.x, problem.goal.y}},
           {"gene", format_gene(gene)},
           {"cutoff", cutoff},
           {"hstar", hstar},
           {"hstar_source", hstar_source},
           {"status", status_name(r.status)},
           {"travel_cost", r.travel_cost},
           {"alpha", suboptimality(r, hstar, cutoff)},
           {"tau", scrubbing(r)},
           {"steps", r.steps},
           {"episodes", r.episodes},
           {"distinct_visited", r.distinct_visited},
           {"total_visits", r.total_visits},
           {"wall_time_s", r.wall_time_s}};
  if (!r.note.empty()) out["note"] = r.note;
  emit(out_path, out.dump(2) + "\n");
  return 0;
}

int run_oracle(const std::string& invocation, const std::string& map_path,
               const std::string& start_s, const std::string& goal_s,
               const std::string& scenario, const std::string& out_path) {
  const auto map = load_map(map_path);
  std::vector<SearchProblem> problems;
  if (!scenario.empty()) {
    problems = parse_scenario(read_file(scenario), map);
    for (auto& p : problems) p.optimal_cost.reset();  // recompute
  } else {
    problems.push_back(SearchProblem{map, parse_cell(start_s),
                                     parse_cell(goal_s), std::nullopt});
  }
  std::string csv = "# invocation=" + invocation + "\n";
  csv += "problem_id,start_x,start_y,goal_x,goal_y,hstar\n";
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const auto& p = problems[i];
    const auto cost = optimal_cost(p);
    csv += std::to_string(i) + ',' + std::to_string(p.start.x) + ',' +
           std::to_string(p.start.y) + ',' + std::to_string(p.goal.x) + ',' +
           std::to_string(p.goal.y) + ',' +
           (cost ? format_double(*cost) : std::string("unreachable")) + '\n';
  }
  emit(out_path, csv);
  return 0;
}

int run_gen_problems(const std::string& invocation,
                     const std::string& map_path, int count,
                     std::uint64_t seed, const std::string& out_path,
                     int jobs) {
  const auto map = load_map(map_path);
  auto problems = random_problems(map, count, seed);
  resolve_optimal(problems, jobs);
  const Metadata meta{{"invocation", invocation},
                      {"seed", std::to_string(seed)}};
  emit(out_path, serialize_scenario(problems, meta));
  return 0;
}

int run_sweep(const std::string& invocation, const std::string& map_path,
              const ProblemSourceOpts& src, const std::string& gene_s,
              bool unchecked, const std::string& block,
              std::vector<double> values, double cutoff, int jobs,
              const std::string& out_path) {
  const auto map = load_map(map_path);
  SweepSpec spec;
  spec.base = parse_gene(gene_s, !unchecked);
  spec.block = block;
  spec.values = std::move(values);
  Metadata meta{{"invocation", invocation},
                {"map", map->id},
                {"gene", format_gene(spec.base)},
                {"cutoff", format_double(cutoff)}};
  spec.suite = load_problems(src, map, jobs, meta);
  spec.cutoff = cutoff;
  spec.jobs = jobs;
  meta.emplace_back("n_problems", std::to_string(spec.suite.size()));
  const auto rows = sweep(spec);
  emit(out_path, serialize_sweep(spec.block, rows, meta));
  return 0;
}

int run_evolve(const std::string& invocation, const std::string& map_path,
               const ProblemSourceOpts& src, EvolutionConfig cfg,
               const std::string& out_path) {
  const auto map = load_map(map_path);
  Metadata meta{{"invocation", invocation},
                {"map", map->id},
                {"cutoff", format_double(cfg.cutoff)},
                {"population", std::to_string(cfg.population_size)},
                {"generations", std::to_string(cfg.generations)}};
  const auto problems = load_problems(src, map, cfg.jobs, meta);
  meta.emplace_back("n_problems", std::to_string(problems.size()));
  const auto log = evolve(cfg, GeneRanges{}, problems);
  emit(out_path, serialize_evolution_log(log, meta));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string invocation = join_invocation(argc, argv);
  CLI::App app{"real-time heuristic search runs over grid maps"};
  app.require_subcommand(1);
  const int default_jobs =
      std::max(1u, std::thread::hardware_concurrency());

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run one gene on one problem");
  std::string s_map, s_start, s_goal, s_scenario, s_gene, s_out;
  int s_index = -1;
  double s_cutoff = 1000;
  bool s_unchecked = false;
  solve_cmd->add_option("--map", s_map)->required();
  auto* s_start_opt = solve_cmd->add_option("--start", s_start, "x,y");
  auto* s_goal_opt = solve_cmd->add_option("--goal", s_goal, "x,y");
  auto* s_scn_opt = solve_cmd->add_option("--scenario", s_scenario);
  solve_cmd->add_option("--index", s_index,
                        "scenario entry to run (default: whole suite)");
  solve_cmd->add_option("--gene", s_gene)->required();
  solve_cmd->add_flag("--unchecked", s_unchecked,
                      "skip gene range validation");
  solve_cmd->add_option("--cutoff", s_cutoff);
  solve_cmd->add_option("--out", s_out, "output path (default stdout)");
  s_start_opt->needs(s_goal_opt);
  s_scn_opt->excludes(s_start_opt);

  // oracle
  auto* oracle_cmd =
      app.add_subcommand("oracle", "exact optimal costs for problems");
  std::string o_map, o_start, o_goal, o_scenario, o_out;
  oracle_cmd->add_option("--map", o_map)->required();
  auto* o_start_opt = oracle_cmd->add_option("--start", o_start, "x,y");
  auto* o_goal_opt = oracle_cmd->add_option("--goal", o_goal, "x,y");
  auto* o_scn_opt = oracle_cmd->add_option("--scenario", o_scenario);
  oracle_cmd->add_option("--out", o_out);
  o_start_opt->needs(o_goal_opt);
  o_scn_opt->excludes(o_start_opt);

  // gen-problems
  auto* gen_cmd = app.add_subcommand(
      "gen-problems", "write a random solvable problem suite");
  std::string g_map, g_out;
  int g_count = 100;
  std::uint64_t g_seed = seed_fallback();
  gen_cmd->add_option("--map", g_map)->required();
  gen_cmd->add_option("--count", g_count);
  gen_cmd->add_option("--seed", g_seed);
  gen_cmd->add_option("--out", g_out);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "vary one gene block over a suite");
  std::string w_map, w_gene, w_block = "lookahead", w_out;
  std::vector<double> w_values;
  double w_cutoff = 1000;
  bool w_unchecked = false;
  int w_jobs = default_jobs;
  ProblemSourceOpts w_src;
  sweep_cmd->add_option("--map", w_map)->required();
  auto* w_scn = sweep_cmd->add_option("--scenario", w_src.scenario);
  auto* w_cnt = sweep_cmd->add_option("--problems", w_src.count);
  auto* w_pseed =
      sweep_cmd->add_option("--problem-seed", w_src.problem_seed);
  sweep_cmd->add_option("--gene", w_gene)->required();
  sweep_cmd->add_option("--block", w_block);
  sweep_cmd->add_option("--values", w_values, "comma separated")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--cutoff", w_cutoff);
  sweep_cmd->add_flag("--unchecked", w_unchecked);
  sweep_cmd->add_option("--jobs", w_jobs);
  sweep_cmd->add_option("--out", w_out);
  w_scn->excludes(w_cnt);
  w_pseed->needs(w_cnt);

  // evolve
  auto* evo_cmd =
      app.add_subcommand("evolve", "simulated evolution over the gene space");
  std::string e_map, e_out;
  ProblemSourceOpts e_src;
  EvolutionConfig e_cfg;
  e_cfg.seed = seed_fallback();
  e_cfg.jobs = default_jobs;
  evo_cmd->add_option("--map", e_map)->required();
  auto* e_scn = evo_cmd->add_option("--scenario", e_src.scenario);
  auto* e_cnt = evo_cmd->add_option("--problems", e_src.count);
  auto* e_pseed = evo_cmd->add_option("--problem-seed", e_src.problem_seed);
  evo_cmd->add_option("--pop", e_cfg.population_size);
  evo_cmd->add_option("--gens", e_cfg.generations);
  evo_cmd->add_option("--problems-per-agent", e_cfg.problems_per_agent);
  evo_cmd->add_option("--cutoff", e_cfg.cutoff);
  evo_cmd->add_option("--seed", e_cfg.seed);
  evo_cmd->add_option("--elite", e_cfg.elite_count);
  evo_cmd->add_option("--mutation-rate", e_cfg.mutation_rate);
  evo_cmd->add_option("--mut-w", e_cfg.mutation_scale.w);
  evo_cmd->add_option("--mut-lookahead", e_cfg.mutation_scale.lookahead);
  evo_cmd->add_option("--jobs", e_cfg.jobs);
  evo_cmd->add_option("--out", e_out);
  e_scn->excludes(e_cnt);
  e_pseed->needs(e_cnt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      if (s_scenario.empty() && (s_start.empty() || s_goal.empty()))
        throw std::runtime_error(
            "either --scenario or --start/--goal is required");
      return run_solve(invocation, s_map, s_start, s_goal, s_scenario,
                       s_index, s_gene, s_unchecked, s_cutoff, s_out);
    }
    if (oracle_cmd->parsed()) {
      if (o_scenario.empty() && (o_start.empty() || o_goal.empty()))
        throw std::runtime_error(
            "either --scenario or --start/--goal is required");
      return run_oracle(invocation, o_map, o_start, o_goal, o_scenario,
                        o_out);
    }
    if (gen_cmd->parsed())
      return run_gen_problems(invocation, g_map, g_count, g_seed, g_out,
                              default_jobs);
    if (sweep_cmd->parsed()) {
      if (w_src.scenario.empty() && w_src.count <= 0)
        throw std::runtime_error("either --scenario or --problems is required");
      w_src.problem_seed_set = w_pseed->count() > 0;
      return run_sweep(invocation, w_map, w_src, w_gene, w_unchecked,
                       w_block, w_values, w_cutoff, w_jobs, w_out);
    }
    if (evo_cmd->parsed()) {
      if (e_src.scenario.empty() && e_src.count <= 0)
        throw std::runtime_error("either --scenario or --problems is required");
      e_src.problem_seed_set = e_pseed->count() > 0;
      return run_evolve(invocation, e_map, e_src, e_cfg, e_out);
    }
  } catch (const ParseError& e) {
    std::cerr << "gene parse error: " << e.what() << "\n";
    return 1;
  } catch (const RangeError& e) {
    std::cerr << "gene range error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
