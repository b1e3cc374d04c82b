#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wcbs/config.hpp"
#include "wcbs/conflicts.hpp"
#include "wcbs/deadline.hpp"
#include "wcbs/instance.hpp"
#include "wcbs/low_level.hpp"
#include "wcbs/mdd.hpp"

namespace wcbs {

// Constraint-tree node. Paths are shared with the parent except for the
// one agent replanned when the node was created.
struct CTNode {
  int id = 0;
  const CTNode* parent = nullptr;
  std::optional<Constraint> added;  // empty at the root
  std::vector<std::shared_ptr<const Path>> paths;
  std::vector<double> lbs;
  int cost = 0;
  double lb_sum = 0.0;
  std::vector<Conflict> conflicts;
  int depth = 0;

  // Every constraint on the root-to-node chain, root first.
  std::vector<Constraint> constraints() const;
  std::vector<Constraint> constraints_for(int agent) const;
  std::vector<const Path*> path_pointers() const;
};

enum class Outcome { solved, timeout, infeasible };
std::string to_string(Outcome o);

struct SolveStats {
  std::int64_t ct_generated = 0;
  std::int64_t ct_expanded = 0;
  std::int64_t low_level_calls = 0;
  std::int64_t low_level_expansions = 0;
  std::int64_t cardinal = 0;
  std::int64_t semi_cardinal = 0;
  std::int64_t non_cardinal = 0;
  std::int64_t unknown = 0;
  double wall_time_s = 0.0;

  // All deterministic fields (everything except wall time).
  friend bool same_counts(const SolveStats& a, const SolveStats& b) {
    return a.ct_generated == b.ct_generated && a.ct_expanded == b.ct_expanded && a.low_level_calls == b.low_level_calls &&
           a.low_level_expansions == b.low_level_expansions && a.cardinal == b.cardinal &&
           a.semi_cardinal == b.semi_cardinal && a.non_cardinal == b.non_cardinal && a.unknown == b.unknown;
  }
};

struct Solution {
  Outcome outcome = Outcome::infeasible;
  std::vector<Path> paths;
  int sum_of_costs = 0;
  double lb_sum = 0.0;
  SolveStats stats;

  bool solved() const { return outcome == Outcome::solved; }
};

// Instrumentation hooks for tests and analysis.
struct SolveHooks {
  std::function<void(const CTNode&)> on_node_generated;
  std::function<void(const AgentTask&, std::span<const Constraint>, std::span<const Path* const>, const LowLevelResult&)>
      on_low_level;
};

// CBS over a constraint tree. optimal-cbs pops the cheapest node; focal-ecbs
// keeps OPEN by lb_sum and pops from FOCAL = {cost <= w_so * min lb_sum}
// ordered by conflict count, then cost, then id. The root plans agents in id
// order, each seeing only the agents planned before it.
Solution solve(const Instance& instance, const SolverConfig& cfg, const SolveHooks* hooks = nullptr);
Solution solve(const GridMap& map, const std::vector<AgentTask>& tasks, const SolverConfig& cfg,
               const SolveHooks* hooks = nullptr);

// Child of `parent` with `constraint` added and only the constrained agent
// replanned against all other agents' paths. The child's lower bound for that
// agent is max(parent lb, new lb). Returns nullopt when the agent has no path
// (or the deadline expired; check `deadline`).
std::optional<CTNode> replan_child(const Instance& instance, const CTNode& parent, const Constraint& constraint,
                                   const SolverConfig& cfg, const Deadline* deadline = nullptr,
                                   LowLevelResult* low_level = nullptr);

Cardinality classify_conflict(const Conflict& conflict, const CTNode& node, const Instance& instance, MddCache& cache);

// Branching order: with prioritization, cardinal < semi < non < unknown, then
// detection order; otherwise detection order (earliest time, lowest pair).
const Conflict& choose_conflict(const std::vector<Conflict>& classified, bool prioritize);

}  // namespace wcbs
