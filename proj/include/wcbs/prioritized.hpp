#pragma once

#include <vector>

#include "wcbs/cbs.hpp"
#include "wcbs/config.hpp"
#include "wcbs/instance.hpp"

namespace wcbs {

struct PPResult {
  enum class Outcome { solved, failed, timeout };

  Outcome outcome = Outcome::failed;
  std::vector<Path> paths;  // all agents when solved; the planned prefix otherwise
  std::vector<int> costs;
  int failed_agent = -1;
  std::int64_t low_level_expansions = 0;
  double wall_time_s = 0.0;

  bool solved() const { return outcome == Outcome::solved; }
  int sum_of_costs() const;
};

// Weighted-open focal configuration with an effectively unbounded w_so. Its
// root CT node reproduces prioritized planning with the same weight.
SolverConfig cbspp_config(double w_h, double w_so_sentinel = kInfiniteSuboptimality);

// Plans agents in id order with a weighted space-time A* (f = g + w_h * h),
// each treating the earlier agents as moving obstacles. Runs through the
// same low-level search as cbspp_config(w_h) with colliding successors
// pruned, so tie-breaking is identical.
PPResult prioritized_plan(const Instance& instance, double w_h, double timeout_s = 1e9);
PPResult prioritized_plan(const GridMap& map, const std::vector<AgentTask>& tasks, double w_h, double timeout_s = 1e9);

}  // namespace wcbs
