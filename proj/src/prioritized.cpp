#include "wcbs/prioritized.hpp"

#include <numeric>

namespace wcbs {

int PPResult::sum_of_costs() const { return std::accumulate(costs.begin(), costs.end(), 0); }

SolverConfig cbspp_config(double w_h, double w_so_sentinel) {
  SolverConfig cfg = SolverConfig::weighted_open(w_so_sentinel, w_h, false);
  cfg.high_level = HighLevel::focal_ecbs;
  return cfg;
}

PPResult prioritized_plan(const Instance& instance, double w_h, double timeout_s) {
  const SolverConfig cfg = cbspp_config(w_h);
  cfg.validate();
  const Deadline deadline(timeout_s);
  PPResult out;
  const int n = instance.agent_count();
  out.paths.reserve(n);
  std::vector<const Path*> planned(n, nullptr);
  for (int i = 0; i < n; ++i) {
    LowLevelOptions options;
    options.forbid_conflicts = true;
    options.deadline = &deadline;
    auto result = low_level_search(instance.map(), instance.task(i), {}, planned, cfg, instance.heuristic(i), options);
    out.low_level_expansions += result.expansions;
    if (!result.found()) {
      out.outcome = result.status == SearchStatus::timeout ? PPResult::Outcome::timeout : PPResult::Outcome::failed;
      out.failed_agent = i;
      out.wall_time_s = deadline.elapsed();
      return out;
    }
    out.costs.push_back(result.path.cost());
    out.paths.push_back(std::move(result.path));
    planned[i] = &out.paths.back();
  }
  out.outcome = PPResult::Outcome::solved;
  out.wall_time_s = deadline.elapsed();
  return out;
}

PPResult prioritized_plan(const GridMap& map, const std::vector<AgentTask>& tasks, double w_h, double timeout_s) {
  const Instance instance(map, tasks);
  return prioritized_plan(instance, w_h, timeout_s);
}

}  // namespace wcbs
