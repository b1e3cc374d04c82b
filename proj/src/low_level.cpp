#include "wcbs/low_level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace wcbs {

ConflictAvoidanceTable::ConflictAvoidanceTable(std::span<const Path* const> paths) {
  for (const Path* p : paths) {
    if (p == nullptr || p->empty()) continue;
    ++agents_;
    const auto& cells = p->cells;
    const int end = p->cost();
    for (int t = 0; t < end; ++t) {
      ++timed_[vkey(cells[t], t)];
      timed_at_[cells[t]].push_back(t);
    }
    for (int t = 1; t <= end; ++t)
      if (cells[t - 1] != cells[t]) ++moves_[ekey(cells[t - 1], cells[t], t)];
    parked_[cells[end]].push_back(end);
  }
  for (auto& [loc, times] : parked_) std::sort(times.begin(), times.end());
  for (auto& [loc, times] : timed_at_) std::sort(times.begin(), times.end());
}

int ConflictAvoidanceTable::transition_conflicts(Location from, Location to, int t) const {
  if (agents_ == 0) return 0;
  int count = 0;
  if (auto it = timed_.find(vkey(to, t)); it != timed_.end()) count += it->second;
  if (auto it = parked_.find(to); it != parked_.end())
    count += static_cast<int>(std::upper_bound(it->second.begin(), it->second.end(), t) - it->second.begin());
  if (from != to)
    if (auto it = moves_.find(ekey(to, from, t)); it != moves_.end()) count += it->second;
  return count;
}

int ConflictAvoidanceTable::future_collisions(Location goal, int t) const {
  if (agents_ == 0) return 0;
  int count = 0;
  if (auto it = timed_at_.find(goal); it != timed_at_.end())
    count += static_cast<int>(it->second.end() - std::upper_bound(it->second.begin(), it->second.end(), t));
  if (auto it = parked_.find(goal); it != parked_.end())
    count += static_cast<int>(it->second.end() - std::upper_bound(it->second.begin(), it->second.end(), t));
  return count;
}

int count_transition_conflicts(Location from, Location to, int t, std::span<const Path* const> other_paths) {
  int count = 0;
  for (const Path* p : other_paths) {
    if (p == nullptr || p->empty()) continue;
    if (p->at(t) == to) ++count;
    if (from != to && t >= 1 && p->at(t - 1) == to && p->at(t) == from) ++count;
  }
  return count;
}

namespace {

// Path costs are integers, so a bound within rounding error of one is that
// integer. Keeps F_best / w_h from landing a few ulps above the optimum.
double snap_integral(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

struct Node {
  Location loc;
  int t;  // g == t
  int h;
  int c;
  double f_open;
  double f_focal;
  int parent;
  std::uint64_t seq;
  bool terminal;
  bool in_open;
  bool in_focal;
};

// Probe key for searching OPEN by F_open.
struct FKey {
  double f;
};

struct OpenOrder {
  using is_transparent = void;
  const std::vector<Node>* nodes;
  bool operator()(int a, int b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.f_open != y.f_open) return x.f_open < y.f_open;
    if (x.t != y.t) return x.t > y.t;
    return x.seq < y.seq;
  }
  // Every node with F_open <= key sorts before the probe.
  bool operator()(int a, FKey k) const { return (*nodes)[a].f_open <= k.f; }
  bool operator()(FKey k, int a) const { return k.f < (*nodes)[a].f_open; }
};

struct FocalOrder {
  const std::vector<Node>* nodes;
  bool operator()(int a, int b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.f_focal != y.f_focal) return x.f_focal < y.f_focal;
    if (x.f_open != y.f_open) return x.f_open < y.f_open;
    if (x.t != y.t) return x.t > y.t;
    return x.seq < y.seq;
  }
};

class FocalSearch {
 public:
  FocalSearch(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints,
              const ConflictAvoidanceTable& others, const SolverConfig& cfg, const HeuristicTable& h_table,
              const LowLevelOptions& options)
      : map_(map),
        constraints_(task.id, constraints),
        others_(others),
        cfg_(cfg),
        h_(h_table),
        opt_(options),
        start_(map.location(task.start)),
        goal_(map.location(task.goal)),
        open_(OpenOrder{&nodes_}),
        focal_(FocalOrder{&nodes_}) {
    w_f_ = focal_bound(cfg);
    hold_ = constraints_.goal_hold_time(goal_);
    horizon_ = cfg.horizon >= 0 ? cfg.horizon : map.free_count() + constraints_.latest_timestep() + 1;
  }

  LowLevelResult run() {
    LowLevelResult result;
    if (!h_.reachable(start_) || constraints_.vertex_blocked(start_, 0)) return result;

    const int root = insert(start_, 0, false, 0, -1);
    pending_.clear();
    add_to_focal(root);
    f_best_ = nodes_[root].f_open;
    g_min_ = 0;
    bound_ = w_f_ * f_best_;
    double lb = 0.0;

    while (!focal_.empty()) {
      if (opt_.deadline != nullptr && (result.expansions & 63) == 0 && opt_.deadline->expired()) {
        result.status = SearchStatus::timeout;
        result.lb = lb;
        return result;
      }
      const int idx = *focal_.begin();
      if (opt_.trace != nullptr) record_expansion(idx);
      remove_from_queues(idx);

      // F_best and g_min still describe OPEN as it was before this pop.
      const double naive = snap_integral(naive_lower_bound(f_best_, cfg_));
      const double improved = snap_integral(improved_lower_bound(f_best_, g_min_, cfg_));
      lb = std::max(lb, cfg_.improved_lb ? improved : naive);
      if (opt_.trace != nullptr) opt_.trace->bounds.push_back({f_best_, static_cast<double>(g_min_), naive, improved, lb});
      ++result.expansions;

      const Node n = nodes_[idx];
      if (n.terminal) return finish(result, idx, lb);
      if (n.loc == goal_ && n.t >= hold_) {
        const int future = others_.future_collisions(goal_, n.t);
        if (future == 0) return finish(result, idx, lb);
        if (!opt_.forbid_conflicts) insert(goal_, n.t, true, n.c + future, n.parent);
      }

      if (n.t < horizon_) expand(idx);
      result.generated = static_cast<std::int64_t>(generated_);
      update_focal();
    }
    result.lb = lb;
    return result;
  }

 private:
  void expand(int idx) {
    const Node n = nodes_[idx];
    const int t = n.t + 1;
    Location moves[5];
    int count = map_.neighbors(n.loc, moves);
    moves[count++] = n.loc;  // wait
    for (int k = 0; k < count; ++k) {
      const Location to = moves[k];
      if (constraints_.vertex_blocked(to, t) || constraints_.edge_blocked(n.loc, to, t)) continue;
      const int h = h_[to];
      if (h == HeuristicTable::kUnreachable || t + h > horizon_) continue;
      const int inc = others_.transition_conflicts(n.loc, to, t);
      if (opt_.forbid_conflicts && inc > 0) continue;
      insert(to, t, false, n.c + inc, idx);
    }
  }

  // Adds a node for state (loc, t, terminal) or improves the incumbent when
  // the newcomer has strictly fewer conflicts. Returns the node index.
  int insert(Location loc, int t, bool terminal, int c, int parent) {
    const std::uint64_t key = ((static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(map_.cell_count()) + loc) << 1) |
                              static_cast<std::uint64_t>(terminal);
    const int h = terminal ? 0 : h_[loc];
    auto [it, fresh] = index_.try_emplace(key, static_cast<int>(nodes_.size()));
    int idx = it->second;
    if (fresh) {
      nodes_.push_back(Node{loc, t, h, c, f_open(t, h, cfg_), f_focal(t, h, c, cfg_), parent, seq_++, terminal, false, false});
    } else {
      Node& old = nodes_[idx];
      if (c >= old.c) return idx;
      remove_from_queues(idx);
      old.c = c;
      old.f_focal = f_focal(t, h, c, cfg_);
      old.parent = parent;
      old.seq = seq_++;
    }
    ++generated_;
    Node& node = nodes_[idx];
    node.in_open = true;
    open_.insert(idx);
    ++g_count_[node.t];
    pending_.push_back(idx);
    if (opt_.trace != nullptr)
      opt_.trace->generated.push_back({node.loc, node.t, node.t, node.h, node.c, node.f_open, node.f_focal});
    return idx;
  }

  void remove_from_queues(int idx) {
    Node& node = nodes_[idx];
    if (node.in_focal) focal_.erase(idx);
    if (node.in_open) {
      open_.erase(idx);
      auto it = g_count_.find(node.t);
      if (--it->second == 0) g_count_.erase(it);
    }
    node.in_open = node.in_focal = false;
  }

  void add_to_focal(int idx) {
    nodes_[idx].in_focal = true;
    focal_.insert(idx);
  }

  // Equivalent to rescanning all of OPEN: every node outside FOCAL already
  // failed the previous bound, so only fresh nodes and the band
  // (old bound, new bound] need checking.
  void update_focal() {
    if (open_.empty()) {
      pending_.clear();
      return;
    }
    std::vector<std::pair<int, bool>> before;
    if (opt_.trace != nullptr)
      for (int idx : open_) before.emplace_back(idx, nodes_[idx].in_focal);

    const double new_f_best = nodes_[*open_.begin()].f_open;
    if (opt_.trace != nullptr && new_f_best < f_best_) opt_.trace->f_best_monotone = false;
    f_best_ = new_f_best;
    g_min_ = g_count_.begin()->first;
    const double new_bound = w_f_ * f_best_;

    for (int idx : pending_)
      if (nodes_[idx].in_open && !nodes_[idx].in_focal && nodes_[idx].f_open <= new_bound) add_to_focal(idx);
    pending_.clear();
    if (new_bound > bound_) {
      for (auto it = open_.upper_bound(FKey{bound_}); it != open_.end() && nodes_[*it].f_open <= new_bound; ++it)
        if (!nodes_[*it].in_focal) add_to_focal(*it);
    }
    bound_ = new_bound;

    if (opt_.trace != nullptr) check_focal(before);
  }

  void check_focal(const std::vector<std::pair<int, bool>>& before) {
    auto& tr = *opt_.trace;
    ++tr.focal_checks;
    for (auto [idx, was_in_focal] : before) {
      const bool expected = was_in_focal || nodes_[idx].f_open <= bound_;
      if (nodes_[idx].in_focal != expected) tr.focal_matches_rescan = false;
    }
    for (int idx : focal_) {
      if (!nodes_[idx].in_open) tr.focal_matches_rescan = tr.focal_exact = false;
      if (nodes_[idx].f_open > bound_) tr.focal_exact = false;
    }
    for (int idx : open_)
      if (!nodes_[idx].in_focal && nodes_[idx].f_open <= bound_) tr.focal_exact = tr.focal_matches_rescan = false;
  }

  void record_expansion(int idx) {
    const Node& n = nodes_[idx];
    int min_c = std::numeric_limits<int>::max();
    double min_f = std::numeric_limits<double>::infinity();
    for (int o : open_) {
      const Node& x = nodes_[o];
      if (x.c < min_c || (x.c == min_c && x.f_open < min_f)) {
        min_c = x.c;
        min_f = x.f_open;
      }
    }
    opt_.trace->expansions.push_back({n.loc, n.t, n.h, n.c, n.f_open, n.f_focal, min_c, min_f, open_.size(), focal_.size()});
  }

  LowLevelResult& finish(LowLevelResult& result, int idx, double lb) {
    result.status = SearchStatus::found;
    result.lb = lb;
    result.conflicts = nodes_[idx].c;
    result.generated = static_cast<std::int64_t>(generated_);
    const int length = nodes_[idx].t + 1;
    result.path.cells.assign(length, -1);
    // A terminal copy shares (loc, t) with its goal node, so start from it.
    result.path.cells[length - 1] = nodes_[idx].loc;
    for (int p = nodes_[idx].parent; p >= 0; p = nodes_[p].parent) result.path.cells[nodes_[p].t] = nodes_[p].loc;
    return result;
  }

  const GridMap& map_;
  ConstraintTable constraints_;
  const ConflictAvoidanceTable& others_;
  const SolverConfig& cfg_;
  const HeuristicTable& h_;
  const LowLevelOptions& opt_;
  Location start_;
  Location goal_;

  double w_f_ = 1.0;
  int hold_ = 0;
  int horizon_ = 0;
  double f_best_ = 0.0;
  int g_min_ = 0;
  double bound_ = 0.0;
  std::uint64_t seq_ = 0;
  std::size_t generated_ = 0;

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, int> index_;
  std::set<int, OpenOrder> open_;
  std::set<int, FocalOrder> focal_;
  std::map<int, int> g_count_;
  std::vector<int> pending_;
};

}  // namespace

LowLevelResult low_level_search(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints,
                                const ConflictAvoidanceTable& others, const SolverConfig& cfg,
                                const HeuristicTable& h_table, const LowLevelOptions& options) {
  FocalSearch search(map, task, constraints, others, cfg, h_table, options);
  return search.run();
}

LowLevelResult low_level_search(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints,
                                std::span<const Path* const> other_paths, const SolverConfig& cfg,
                                const HeuristicTable& h_table, const LowLevelOptions& options) {
  const ConflictAvoidanceTable others(other_paths);
  return low_level_search(map, task, constraints, others, cfg, h_table, options);
}

}  // namespace wcbs
