#include "wcbs/mdd.hpp"

#include <algorithm>
#include <mutex>

namespace wcbs {

bool Mdd::contains(int t, Location loc) const {
  if (empty() || t < 0) return false;
  if (t > cost) return levels.back().front() == loc;
  return std::binary_search(levels[t].begin(), levels[t].end(), loc);
}

Mdd build_mdd(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints, int cost,
              const HeuristicTable& h_table) {
  Mdd mdd;
  mdd.agent = task.id;
  const ConstraintTable table(task.id, constraints);
  const Location start = map.location(task.start);
  const Location goal = map.location(task.goal);
  if (cost < 0 || !h_table.reachable(start) || h_table[start] > cost || table.goal_hold_time(goal) > cost ||
      table.vertex_blocked(start, 0))
    return mdd;

  auto valid_move = [&](Location u, Location v, int t) {
    return !table.vertex_blocked(v, t) && !table.edge_blocked(u, v, t);
  };

  // Forward: states reachable from the start that can still reach the goal in time.
  std::vector<std::vector<Location>> forward(cost + 1);
  forward[0] = {start};
  std::vector<std::uint8_t> mark(map.cell_count(), 0);
  Location nbr[5];
  for (int t = 1; t <= cost; ++t) {
    for (Location u : forward[t - 1]) {
      int n = map.neighbors(u, nbr);
      nbr[n++] = u;
      for (int k = 0; k < n; ++k) {
        const Location v = nbr[k];
        if (mark[v] || !h_table.reachable(v) || h_table[v] > cost - t || !valid_move(u, v, t)) continue;
        mark[v] = 1;
        forward[t].push_back(v);
      }
    }
    for (Location v : forward[t]) mark[v] = 0;
  }
  if (std::find(forward[cost].begin(), forward[cost].end(), goal) == forward[cost].end()) return mdd;

  // Backward: keep states with a valid successor in the next kept level.
  std::vector<std::vector<Location>> levels(cost + 1);
  levels[cost] = {goal};
  for (int t = cost - 1; t >= 0; --t) {
    for (Location v : levels[t + 1]) mark[v] = 1;
    for (Location u : forward[t]) {
      int n = map.neighbors(u, nbr);
      nbr[n++] = u;
      for (int k = 0; k < n; ++k) {
        if (mark[nbr[k]] && valid_move(u, nbr[k], t + 1)) {
          levels[t].push_back(u);
          break;
        }
      }
    }
    for (Location v : levels[t + 1]) mark[v] = 0;
  }
  for (auto& level : levels) std::sort(level.begin(), level.end());
  mdd.cost = cost;
  mdd.levels = std::move(levels);
  return mdd;
}

std::shared_ptr<const Mdd> MddCache::get(const Instance& instance, int agent, std::span<const Constraint> constraints,
                                         int cost) {
  std::vector<Constraint> own;
  for (const auto& c : constraints)
    if (c.agent == agent) own.push_back(c);
  std::sort(own.begin(), own.end());
  own.erase(std::unique(own.begin(), own.end()), own.end());
  Key key{agent, cost, std::move(own)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  auto mdd = std::make_shared<const Mdd>(
      build_mdd(instance.map(), instance.task(agent), std::get<2>(key), cost, instance.heuristic(agent)));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = memo_.try_emplace(std::move(key), std::move(mdd));
  return it->second;
}

std::size_t MddCache::size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

bool eligible_for_classification(const Path& path, double lb) { return path.cost() <= lb + 1e-9; }

namespace {

bool narrow(const Conflict& conflict, int agent, const AgentSide& side, const Instance& instance, MddCache& cache) {
  const auto mdd = cache.get(instance, agent, side.constraints, side.path->cost());
  if (mdd->empty()) return false;
  if (conflict.kind == ConstraintKind::vertex) return mdd->width(conflict.t) == 1;
  return mdd->width(conflict.t - 1) == 1 && mdd->width(conflict.t) == 1;
}

}  // namespace

Cardinality classify_conflict(const Conflict& conflict, const AgentSide& first, const AgentSide& second,
                              const Instance& instance, MddCache& cache) {
  const bool e1 = eligible_for_classification(*first.path, first.lb);
  const bool e2 = eligible_for_classification(*second.path, second.lb);
  const bool n1 = e1 && narrow(conflict, conflict.a1, first, instance, cache);
  const bool n2 = e2 && narrow(conflict, conflict.a2, second, instance, cache);
  if (e1 && e2) {
    if (n1 && n2) return Cardinality::cardinal;
    if (n1 || n2) return Cardinality::semi_cardinal;
    return Cardinality::non_cardinal;
  }
  if (n1 || n2) return Cardinality::semi_cardinal;
  return Cardinality::unknown;
}

}  // namespace wcbs
