#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtsearch/csv.hpp"
#include "rtsearch/evolution.hpp"
#include "rtsearch/gene.hpp"
#include "rtsearch/grid.hpp"
#include "rtsearch/harness.hpp"
#include "rtsearch/metrics.hpp"
#include "rtsearch/oracle.hpp"
#include "rtsearch/search.hpp"

namespace py = pybind11;
using namespace rtsearch;

PYBIND11_MODULE(rtsearch, m) {
  m.doc() = "grid pathfinding with a configurable family of real-time "
            "heuristic search algorithms";

  py::class_<Cell>(m, "Cell")
      .def(py::init<int, int>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Cell::x)
      .def_readwrite("y", &Cell::y)
      .def("__eq__", [](const Cell& a, const Cell& b) { return a == b; })
      .def("__repr__", [](const Cell& c) {
        return "Cell(" + std::to_string(c.x) + ", " + std::to_string(c.y) +
               ")";
      });

  py::class_<GridMap, std::shared_ptr<GridMap>>(m, "GridMap")
      .def_readonly("width", &GridMap::width)
      .def_readonly("height", &GridMap::height)
      .def_readonly("id", &GridMap::id)
      .def("passable", &GridMap::passable)
      .def("passable_count", &GridMap::passable_count)
      .def("__eq__",
           [](const GridMap& a, const GridMap& b) { return a == b; });

  py::class_<SearchProblem>(m, "SearchProblem")
      .def_property_readonly(
          "map",
          [](const SearchProblem& p) {
            return std::const_pointer_cast<GridMap>(p.map);
          })
      .def_readwrite("start", &SearchProblem::start)
      .def_readwrite("goal", &SearchProblem::goal)
      .def_readwrite("optimal_cost", &SearchProblem::optimal_cost);

  py::enum_<Lop>(m, "Lop").value("Min", Lop::Min).value("Max", Lop::Max);
  py::enum_<LookaheadMethod>(m, "LookaheadMethod")
      .value("AStar", LookaheadMethod::AStar)
      .value("Greedy", LookaheadMethod::Greedy);
  py::enum_<RunStatus>(m, "RunStatus")
      .value("Solved", RunStatus::Solved)
      .value("CutOff", RunStatus::CutOff)
      .value("Stuck", RunStatus::Stuck)
      .value("CycleAborted", RunStatus::CycleAborted);

  py::class_<Gene>(m, "Gene")
      .def(py::init<>())
      .def_readwrite("w", &Gene::w)
      .def_readwrite("lop", &Gene::lop)
      .def_readwrite("da", &Gene::da)
      .def_readwrite("lookahead", &Gene::lookahead)
      .def_readwrite("method", &Gene::method)
      .def_readwrite("da_threshold", &Gene::da_threshold)
      .def("__eq__", [](const Gene& a, const Gene& b) { return a == b; })
      .def("__repr__", [](const Gene& g) { return format_gene(g); });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("status", &RunResult::status)
      .def_readonly("travel_cost", &RunResult::travel_cost)
      .def_readonly("distinct_visited", &RunResult::distinct_visited)
      .def_readonly("total_visits", &RunResult::total_visits)
      .def_readonly("steps", &RunResult::steps)
      .def_readonly("episodes", &RunResult::episodes)
      .def_readonly("wall_time_s", &RunResult::wall_time_s)
      .def_readonly("note", &RunResult::note);

  py::class_<ProblemMetrics>(m, "ProblemMetrics")
      .def_readonly("alpha", &ProblemMetrics::alpha)
      .def_readonly("tau", &ProblemMetrics::tau)
      .def_readonly("solved", &ProblemMetrics::solved)
      .def_readonly("travel_cost", &ProblemMetrics::travel_cost)
      .def_readonly("hstar", &ProblemMetrics::hstar)
      .def_readonly("status", &ProblemMetrics::status)
      .def_readonly("steps", &ProblemMetrics::steps)
      .def_readonly("episodes", &ProblemMetrics::episodes);

  py::class_<Summary>(m, "Summary")
      .def_readonly("n", &Summary::n)
      .def_readonly("mean_alpha", &Summary::mean_alpha)
      .def_readonly("mean_tau", &Summary::mean_tau)
      .def_readonly("solve_rate", &Summary::solve_rate)
      .def_readonly("p50_alpha", &Summary::p50_alpha)
      .def_readonly("p95_alpha", &Summary::p95_alpha)
      .def_readonly("p50_tau", &Summary::p50_tau)
      .def_readonly("p95_tau", &Summary::p95_tau);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("value", &SweepRow::value)
      .def_readonly("summary", &SweepRow::summary);

  py::class_<MutationScale>(m, "MutationScale")
      .def(py::init<>())
      .def_readwrite("w", &MutationScale::w)
      .def_readwrite("lookahead", &MutationScale::lookahead);

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &EvolutionConfig::population_size)
      .def_readwrite("generations", &EvolutionConfig::generations)
      .def_readwrite("problems_per_agent",
                     &EvolutionConfig::problems_per_agent)
      .def_readwrite("cutoff", &EvolutionConfig::cutoff)
      .def_readwrite("seed", &EvolutionConfig::seed)
      .def_readwrite("elite_count", &EvolutionConfig::elite_count)
      .def_readwrite("mutation_rate", &EvolutionConfig::mutation_rate)
      .def_readwrite("mutation_scale", &EvolutionConfig::mutation_scale)
      .def_readwrite("jobs", &EvolutionConfig::jobs);

  py::class_<GeneRecord>(m, "GeneRecord")
      .def_readonly("gene", &GeneRecord::gene)
      .def_readonly("fitness", &GeneRecord::fitness)
      .def_readonly("mean_tau", &GeneRecord::mean_tau)
      .def_readonly("solve_rate", &GeneRecord::solve_rate);

  py::class_<GenerationRecord>(m, "GenerationRecord")
      .def_readonly("generation", &GenerationRecord::generation)
      .def_readonly("ranked", &GenerationRecord::ranked)
      .def_readonly("best_so_far", &GenerationRecord::best_so_far);

  py::class_<EvolutionLog>(m, "EvolutionLog")
      .def_readonly("seed", &EvolutionLog::seed)
      .def_readonly("generations", &EvolutionLog::generations);

  // grid world
  m.def(
      "parse_map",
      [](const std::string& text, const std::string& id) {
        return std::make_shared<GridMap>(parse_map(text, id));
      },
      py::arg("text"), py::arg("id") = "");
  m.def("serialize_map", &serialize_map);
  m.def("octile_h0", &octile_h0);
  m.def("neighbors", [](std::shared_ptr<const GridMap> map, Cell s) {
    std::vector<std::pair<Cell, double>> out;
    for (const auto& st : neighbors(*map, s)) out.emplace_back(st.to, st.cost);
    return out;
  });
  m.def("random_problems", &random_problems, py::arg("map"), py::arg("n"),
        py::arg("seed"));
  m.def(
      "parse_scenario",
      [](const std::string& text, std::shared_ptr<const GridMap> map) {
        return parse_scenario(text, std::move(map));
      },
      py::arg("text"), py::arg("map"));
  m.def("serialize_scenario", &serialize_scenario, py::arg("problems"),
        py::arg("metadata") = Metadata{});

  // genes
  m.def(
      "parse_gene",
      [](const std::string& text, bool checked) {
        return parse_gene(text, checked);
      },
      py::arg("text"), py::arg("checked") = true);
  m.def("format_gene", &format_gene);

  // search and metrics
  m.def("solve", &solve, py::arg("problem"), py::arg("gene"),
        py::arg("cutoff"), py::arg("hstar"),
        py::call_guard<py::gil_scoped_release>());
  m.def("optimal_cost",
        py::overload_cast<const SearchProblem&>(&optimal_cost));
  m.def("suboptimality", &suboptimality);
  m.def("scrubbing", &scrubbing);
  m.def("aggregate", &aggregate);

  // harness and evolution
  m.def(
      "resolve_optimal",
      [](std::vector<SearchProblem> problems, int jobs) {
        resolve_optimal(problems, jobs);
        return problems;
      },
      py::arg("problems"), py::arg("jobs") = 1);
  m.def(
      "run_suite",
      [](const Gene& gene, std::vector<SearchProblem> problems, double cutoff,
         int jobs) {
        py::gil_scoped_release release;
        return run_suite(gene, problems, cutoff, jobs);
      },
      py::arg("gene"), py::arg("problems"), py::arg("cutoff"),
      py::arg("jobs") = 1);
  m.def(
      "sweep",
      [](const Gene& base, const std::string& block,
         std::vector<double> values, std::vector<SearchProblem> suite,
         double cutoff, int jobs) {
        SweepSpec spec{base, block, std::move(values), std::move(suite),
                       cutoff, jobs};
        py::gil_scoped_release release;
        return sweep(spec);
      },
      py::arg("base"), py::arg("block"), py::arg("values"), py::arg("suite"),
      py::arg("cutoff") = 1000.0, py::arg("jobs") = 1);
  m.def("fitness", &fitness, py::arg("gene"), py::arg("problems"),
        py::arg("cutoff"), py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "evolve",
      [](const EvolutionConfig& cfg, std::vector<SearchProblem> problems) {
        py::gil_scoped_release release;
        return evolve(cfg, GeneRanges{}, problems);
      },
      py::arg("config"), py::arg("problems"));
  m.def("serialize_evolution_log", &serialize_evolution_log, py::arg("log"),
        py::arg("metadata") = Metadata{});
}
