#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtsearch/gene.hpp"
#include "rtsearch/grid.hpp"

namespace rtsearch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Weighted backups compound across episodes (h <- w*(c + h)), so learned
// values in deep depressions grow geometrically and would overflow to
// infinity, which the backup uses as its "unvisited" sentinel. Saturate
// instead: w*(c + 1e300) stays finite and re-clamps to the same bound.
inline constexpr double kHeuristicCeiling = 1e300;

enum class RunStatus { Solved, CutOff, Stuck, CycleAborted };
const char* status_name(RunStatus s);
RunStatus status_from_name(std::string_view name);

struct InternalInconsistency : std::logic_error {
  explicit InternalInconsistency(const std::string& m) : std::logic_error(m) {}
};

// One planning episode's local search space. Cell indices are row-major.
struct LssResult {
  std::vector<int> open;      // frontier, ascending cell index
  std::vector<double> open_g; // g values parallel to open
  std::vector<int> closed;    // expanded cells, ascending cell index
  int expansions = 0;
};

struct RunResult {
  RunStatus status = RunStatus::Stuck;
  double travel_cost = 0;
  long long distinct_visited = 0;
  long long total_visits = 0;
  long long steps = 0;     // cells entered while moving
  long long episodes = 0;  // planning episodes
  double wall_time_s = 0;
  std::string note;        // e.g. the offending cycle for CycleAborted
};

// Mutable per-run search memory. The h table and the parent tree persist
// across episodes; g and the open/closed marks are episode-stamped so a new
// episode resets them in O(1).
class AgentState {
 public:
  AgentState(std::shared_ptr<const GridMap> map, Cell start, Cell goal);

  std::shared_ptr<const GridMap> map;
  Cell current;
  Cell goal;

  std::vector<double> h;       // current heuristic, h[goal] stays 0
  std::vector<double> h0;      // initial octile values toward goal
  std::vector<std::int32_t> parent;    // tree pointers, -1 = none
  std::vector<std::int32_t> children;  // cells whose parent is this cell
  std::vector<std::int32_t> visit;     // physical visits per cell
  long long total_visits = 0;
  long long distinct_visited = 0;
  long long steps = 0;
  double distance_traveled = 0;

  std::uint32_t episode = 0;
  static constexpr std::uint32_t kNoStamp = 0xffffffffu;

  double g(int idx) const {
    return g_stamp_[idx] == episode ? g_val_[idx] : kInf;
  }
  void set_g(int idx, double value) {
    g_stamp_[idx] = episode;
    g_val_[idx] = value;
  }
  void set_parent(int child, int par) {
    const std::int32_t old = parent[child];
    if (old >= 0) --children[old];
    parent[child] = par;
    if (par >= 0) ++children[par];
  }
  void begin_episode() { ++episode; }
  void enter(int idx) {
    if (visit[idx]++ == 0) ++distinct_visited;
    ++total_visits;
    ++steps;
  }

  // episode-stamped membership marks plus walk bookkeeping, owned here so
  // the search operations stay allocation-free per episode
  std::vector<double> g_val_;
  std::vector<std::uint32_t> g_stamp_;
  std::vector<std::uint32_t> open_mark_, closed_mark_, work_mark_, walk_mark_;
  std::vector<std::int32_t> open_pos_, work_pos_;
  std::vector<std::uint8_t> da_ok_;
  std::uint32_t walk_epoch_ = 0;
};

// Expansion candidate ordering: Greedy keys on h, AStar on h+g; ties prefer
// the larger g, then the smaller row-major index.
int select_next_expansion(const std::vector<int>& open,
                          const std::vector<double>& g,
                          const std::vector<double>& h,
                          LookaheadMethod method);

// Depression-avoidance filter: keeps cells with h - h0 < th. An empty
// result falls back to the unfiltered set so expansion never deadlocks.
std::vector<int> da_filter(const std::vector<int>& open,
                           const std::vector<double>& h,
                           const std::vector<double>& h0, double th);

// Grows the local search space around state.current: g(current) = 0,
// everything else infinite, then expand by the gene's method until the best
// frontier f reaches g(goal), the lookahead budget is spent, or the frontier
// empties. Relaxations set tree pointers; a re-relaxed expanded cell moves
// back to the frontier so open and closed stay disjoint.
LssResult generate_lss(AgentState& state, const Gene& gene);

// The movement target: argmin h+g over the frontier (same tie rule as
// expansion selection).
int pick_move_target(const LssResult& lss, const AgentState& state);

// Dijkstra-style backup over the LSS: closed cells are set to infinity and
// then relaxed from the frontier inward, extracting by the learning
// operator; each relaxation writes w * (cost + h). h(goal) is never touched.
void update_heuristics(const LssResult& lss, AgentState& state,
                       const Gene& gene);

struct MoveOutcome {
  enum class Kind { Moved, CycleDetected, RepairFailed };
  Kind kind = Kind::Moved;
  std::vector<Cell> path;  // forward, current..target; cycle chain on abort
  double cost = 0;
};

// Walks tree pointers backward from target to current and then applies the
// movement. If no pointer into current exists, a tree neighbor is pointed at
// it first (repair). A revisited cell aborts the walk with no movement.
MoveOutcome move_to_best_frontier(AgentState& state, Cell target);

// One full run: plan / learn / move until the goal is reached, travel
// exceeds cutoff * hstar, the frontier empties, or a tree cycle aborts.
RunResult solve(const SearchProblem& problem, const Gene& gene, double cutoff,
                double hstar);

}  // namespace rtsearch
