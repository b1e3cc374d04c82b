#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <tuple>
#include <vector>

#include "wcbs/conflicts.hpp"
#include "wcbs/constraints.hpp"
#include "wcbs/heuristic.hpp"
#include "wcbs/instance.hpp"

namespace wcbs {

// Layered graph of every cell an agent can occupy at each timestep on some
// constraint-respecting path that arrives at its goal at exactly `cost`.
struct Mdd {
  int agent = 0;
  int cost = -1;
  std::vector<std::vector<Location>> levels;  // sorted cells per timestep

  bool empty() const { return levels.empty(); }
  // Width at t; times past `cost` are the parked goal, width 1.
  std::size_t width(int t) const { return t > cost ? 1 : levels[t].size(); }
  bool contains(int t, Location loc) const;
};

Mdd build_mdd(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints, int cost,
              const HeuristicTable& h_table);

// Memo keyed by (agent, cost, that agent's sorted constraints).
class MddCache {
 public:
  std::shared_ptr<const Mdd> get(const Instance& instance, int agent, std::span<const Constraint> constraints, int cost);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, std::vector<Constraint>>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Mdd>> memo_;
};

// One agent's view of a CT node, as needed for classification.
struct AgentSide {
  const Path* path = nullptr;
  double lb = 0.0;
  std::span<const Constraint> constraints;
};

// A side is eligible when its path cost equals its lower bound, and narrow
// when additionally its MDD at that cost is a singleton at the conflict
// (vertex) or forces the conflicting move (edge). Two narrow sides give
// cardinal, one semi-cardinal, none non-cardinal when both are eligible.
// With one eligible side: narrow gives semi-cardinal, otherwise unknown.
// With no eligible side: unknown.
Cardinality classify_conflict(const Conflict& conflict, const AgentSide& first, const AgentSide& second,
                              const Instance& instance, MddCache& cache);

bool eligible_for_classification(const Path& path, double lb);

}  // namespace wcbs
