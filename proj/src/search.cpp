#include "rtsearch/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rtsearch {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Solved: return "Solved";
    case RunStatus::CutOff: return "CutOff";
    case RunStatus::Stuck: return "Stuck";
    case RunStatus::CycleAborted: return "CycleAborted";
  }
  return "?";
}

RunStatus status_from_name(std::string_view name) {
  if (name == "Solved") return RunStatus::Solved;
  if (name == "CutOff") return RunStatus::CutOff;
  if (name == "Stuck") return RunStatus::Stuck;
  if (name == "CycleAborted") return RunStatus::CycleAborted;
  throw std::invalid_argument("unknown run status '" + std::string(name) +
                              "'");
}

AgentState::AgentState(std::shared_ptr<const GridMap> m, Cell start, Cell g)
    : map(std::move(m)), current(start), goal(g) {
  const int n = map->cell_count();
  h0.resize(n);
  for (int i = 0; i < n; ++i) h0[i] = octile_h0(map->cell_at(i), goal);
  h = h0;
  parent.assign(n, -1);
  children.assign(n, 0);
  visit.assign(n, 0);
  g_val_.assign(n, 0);
  g_stamp_.assign(n, kNoStamp);
  open_mark_.assign(n, kNoStamp);
  closed_mark_.assign(n, kNoStamp);
  work_mark_.assign(n, kNoStamp);
  walk_mark_.assign(n, 0);
  open_pos_.assign(n, -1);
  work_pos_.assign(n, -1);
  da_ok_.assign(n, 0);
  visit[map->index(start)] = 1;
  total_visits = 1;
  distinct_visited = 1;
}

namespace {

// shared tie rule: larger g first, then smaller row-major index
inline bool better_candidate(double key_a, double g_a, int id_a, double key_b,
                             double g_b, int id_b) {
  if (key_a != key_b) return key_a < key_b;
  if (g_a != g_b) return g_a > g_b;
  return id_a < id_b;
}

}  // namespace

int select_next_expansion(const std::vector<int>& open,
                          const std::vector<double>& g,
                          const std::vector<double>& h,
                          LookaheadMethod method) {
  int best = -1;
  double best_key = 0, best_g = 0;
  for (int id : open) {
    const double key =
        method == LookaheadMethod::Greedy ? h[id] : h[id] + g[id];
    if (best < 0 || better_candidate(key, g[id], id, best_key, best_g, best)) {
      best = id;
      best_key = key;
      best_g = g[id];
    }
  }
  if (best < 0) throw std::invalid_argument("open set is empty");
  return best;
}

std::vector<int> da_filter(const std::vector<int>& open,
                           const std::vector<double>& h,
                           const std::vector<double>& h0, double th) {
  std::vector<int> kept;
  kept.reserve(open.size());
  for (int id : open)
    if (h[id] - h0[id] < th) kept.push_back(id);
  if (kept.empty()) return open;  // never leave expansion without a candidate
  return kept;
}

LssResult generate_lss(AgentState& st, const Gene& gene) {
  st.begin_episode();
  const GridMap& map = *st.map;
  const std::uint32_t ep = st.episode;
  const int root = map.index(st.current);
  const int goal = map.index(st.goal);

  std::vector<int> open_list;
  std::vector<int> closed_seen;  // first-close order, may contain reopened
  auto open_insert = [&](int id) {
    st.open_mark_[id] = ep;
    st.open_pos_[id] = static_cast<int>(open_list.size());
    open_list.push_back(id);
    st.da_ok_[id] = st.h[id] - st.h0[id] < gene.da_threshold ? 1 : 0;
  };
  auto open_remove = [&](int id) {
    const int pos = st.open_pos_[id];
    const int back = open_list.back();
    open_list[pos] = back;
    st.open_pos_[back] = pos;
    open_list.pop_back();
    st.open_mark_[id] = AgentState::kNoStamp;
  };

  st.set_g(root, 0.0);
  open_insert(root);

  int expansions = 0;
  for (;;) {
    if (open_list.empty()) break;
    ++expansions;

    // goal-reachability condition: when the frontier is a single cell with
    // an improvable neighbor, the expansion below must refill it
    bool lone_improvable = false;
    if (open_list.size() == 1) {
      const int lone = open_list.front();
      const double gl = st.g(lone);
      for_each_neighbor(map, map.cell_at(lone), [&](Cell t, double c) {
        if (st.g(map.index(t)) > gl + c) lone_improvable = true;
      });
    }

    // selection; with da on, prefer non-depressed candidates
    int best = -1, best_da = -1;
    double bk = 0, bg = 0, dk = 0, dg = 0;
    for (int id : open_list) {
      const double gv = st.g(id);
      const double key = gene.method == LookaheadMethod::Greedy
                             ? st.h[id]
                             : st.h[id] + gv;
      if (best < 0 || better_candidate(key, gv, id, bk, bg, best)) {
        best = id;
        bk = key;
        bg = gv;
      }
      if (gene.da && st.da_ok_[id] &&
          (best_da < 0 || better_candidate(key, gv, id, dk, dg, best_da))) {
        best_da = id;
        dk = key;
        dg = gv;
      }
    }
    const int chosen = (gene.da && best_da >= 0) ? best_da : best;

    open_remove(chosen);
    if (st.closed_mark_[chosen] != ep) closed_seen.push_back(chosen);
    st.closed_mark_[chosen] = ep;

    const double gs = st.g(chosen);
    for_each_neighbor(map, map.cell_at(chosen), [&](Cell t, double c) {
      const int ti = map.index(t);
      if (st.g(ti) > gs + c) {
        st.set_g(ti, gs + c);
        st.set_parent(ti, chosen);
        if (st.closed_mark_[ti] == ep)
          st.closed_mark_[ti] = AgentState::kNoStamp;  // reopen
        if (st.open_mark_[ti] != ep) open_insert(ti);
      }
    });

    if (lone_improvable && open_list.empty())
      throw InternalInconsistency(
          "a lone improvable frontier emptied after expansion");

    if (open_list.empty()) break;
    double min_f = kInf;
    for (int id : open_list) min_f = std::min(min_f, st.g(id) + st.h[id]);
    if (!(st.g(goal) > min_f) || expansions >= gene.lookahead) break;
  }

  LssResult lss;
  lss.expansions = expansions;
  lss.open.assign(open_list.begin(), open_list.end());
  std::sort(lss.open.begin(), lss.open.end());
  lss.open_g.reserve(lss.open.size());
  for (int id : lss.open) lss.open_g.push_back(st.g(id));
  for (int id : closed_seen)
    if (st.closed_mark_[id] == ep) lss.closed.push_back(id);
  std::sort(lss.closed.begin(), lss.closed.end());
  lss.closed.erase(std::unique(lss.closed.begin(), lss.closed.end()),
                   lss.closed.end());
  return lss;
}

int pick_move_target(const LssResult& lss, const AgentState& st) {
  int best = -1;
  double bk = 0, bg = 0;
  for (std::size_t i = 0; i < lss.open.size(); ++i) {
    const int id = lss.open[i];
    const double gv = lss.open_g[i];
    const double key = st.h[id] + gv;
    if (best < 0 || better_candidate(key, gv, id, bk, bg, best)) {
      best = id;
      bk = key;
      bg = gv;
    }
  }
  if (best < 0) throw std::invalid_argument("open set is empty");
  return best;
}

void update_heuristics(const LssResult& lss, AgentState& st,
                       const Gene& gene) {
  const GridMap& map = *st.map;
  const std::uint32_t ep = st.episode;
  const int goal = map.index(st.goal);

  int remaining = 0;
  bool goal_closed = false;
  for (int id : lss.closed) {
    st.closed_mark_[id] = ep;
    ++remaining;
    if (id == goal)
      goal_closed = true;  // h(goal) is immutable, it backs up as a source
    else
      st.h[id] = kInf;
  }

  std::vector<int> work;
  auto work_insert = [&](int id) {
    st.work_mark_[id] = ep;
    st.work_pos_[id] = static_cast<int>(work.size());
    work.push_back(id);
  };
  auto work_remove = [&](int id) {
    const int pos = st.work_pos_[id];
    const int back = work.back();
    work[pos] = back;
    st.work_pos_[back] = pos;
    work.pop_back();
    st.work_mark_[id] = AgentState::kNoStamp;
  };
  for (int id : lss.open) work_insert(id);
  if (goal_closed) work_insert(goal);

  const bool take_min = gene.lop == Lop::Min;
  while (remaining > 0) {
    if (work.empty())
      throw InternalInconsistency(
          "heuristic backup drained its frontier before covering the LSS");
    int chosen = -1;
    for (int id : work) {
      if (chosen < 0) {
        chosen = id;
        continue;
      }
      const double a = st.h[id], b = st.h[chosen];
      if (take_min ? (a < b || (a == b && id < chosen))
                   : (a > b || (a == b && id < chosen)))
        chosen = id;
    }
    work_remove(chosen);
    if (st.closed_mark_[chosen] == ep) {
      st.closed_mark_[chosen] = AgentState::kNoStamp;
      --remaining;
    }
    const double hs = st.h[chosen];
    for_each_neighbor(map, map.cell_at(chosen), [&](Cell t, double c) {
      const int ti = map.index(t);
      if (st.closed_mark_[ti] != ep) return;
      const double backed =
          std::min(gene.w * (c + hs), kHeuristicCeiling);
      if (st.h[ti] > backed) {
        st.h[ti] = backed;
        if (st.work_mark_[ti] != ep) work_insert(ti);
      }
    });
  }
}

namespace {

inline double step_cost(Cell a, Cell b) {
  return (a.x != b.x && a.y != b.y) ? kSqrt2 : 1.0;
}

std::string describe_chain(const std::vector<Cell>& chain) {
  std::string out;
  for (const Cell& c : chain) {
    if (!out.empty()) out += "<-";
    out += "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  }
  return out;
}

}  // namespace

MoveOutcome move_to_best_frontier(AgentState& st, Cell target) {
  const GridMap& map = *st.map;
  const int cur = map.index(st.current);
  const int tgt = map.index(target);
  if (tgt == cur) return {MoveOutcome::Kind::Moved, {st.current}, 0};

  // tree repair: if nothing points at the current cell the backward walk
  // could never stop there, so point a neighbor that is in the tree at it
  if (st.children[cur] == 0) {
    int fix = -1;
    for_each_neighbor(map, st.current, [&](Cell t, double) {
      const int ti = map.index(t);
      if (fix < 0 && st.children[ti] > 0) fix = ti;
    });
    if (fix < 0) return {MoveOutcome::Kind::RepairFailed, {}, 0};
    st.set_parent(fix, cur);
  }

  // walk the tree backward, detecting revisits before touching any state
  ++st.walk_epoch_;
  std::vector<Cell> chain{target};
  double cost = 0;
  st.walk_mark_[tgt] = st.walk_epoch_;
  int s = tgt;
  while (s != cur) {
    const int p = st.parent[s];
    if (p < 0) return {MoveOutcome::Kind::RepairFailed, {}, 0};
    cost += step_cost(map.cell_at(s), map.cell_at(p));
    if (st.walk_mark_[p] == st.walk_epoch_) {
      chain.push_back(map.cell_at(p));
      return {MoveOutcome::Kind::CycleDetected, std::move(chain), 0};
    }
    st.walk_mark_[p] = st.walk_epoch_;
    chain.push_back(map.cell_at(p));
    s = p;
  }

  std::reverse(chain.begin(), chain.end());  // current .. target
  for (std::size_t i = 1; i < chain.size(); ++i)
    st.enter(map.index(chain[i]));
  st.distance_traveled += cost;
  st.current = target;
  return {MoveOutcome::Kind::Moved, std::move(chain), cost};
}

RunResult solve(const SearchProblem& problem, const Gene& gene, double cutoff,
                double hstar) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  if (problem.start == problem.goal) {
    r.status = RunStatus::Solved;
    r.distinct_visited = r.total_visits = 1;
    return r;
  }

  AgentState st(problem.map, problem.start, problem.goal);
  const double budget = cutoff * hstar;
  for (;;) {
    LssResult lss = generate_lss(st, gene);
    ++r.episodes;
    if (lss.open.empty()) {
      r.status = RunStatus::Stuck;
      break;
    }
    const int target = pick_move_target(lss, st);
    update_heuristics(lss, st, gene);
    const MoveOutcome mv =
        move_to_best_frontier(st, st.map->cell_at(target));
    if (mv.kind == MoveOutcome::Kind::CycleDetected) {
      r.status = RunStatus::CycleAborted;
      r.note = "tree cycle: " + describe_chain(mv.path);
      break;
    }
    if (mv.kind == MoveOutcome::Kind::RepairFailed) {
      r.status = RunStatus::Stuck;
      r.note = "tree walk failed";
      break;
    }
    if (st.current == problem.goal) {
      r.status = RunStatus::Solved;
      break;
    }
    if (st.distance_traveled > budget) {
      r.status = RunStatus::CutOff;
      break;
    }
  }

  r.travel_cost = st.distance_traveled;
  r.distinct_visited = st.distinct_visited;
  r.total_visits = st.total_visits;
  r.steps = st.steps;
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

}  // namespace rtsearch
