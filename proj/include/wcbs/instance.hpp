#pragma once

#include <vector>

#include "wcbs/grid.hpp"
#include "wcbs/heuristic.hpp"

namespace wcbs {

// A map, its agents, and their (lazily built, shared) cost-to-go tables.
class Instance {
 public:
  // Validates the tasks against the map. Throws std::invalid_argument.
  Instance(const GridMap& map, std::vector<AgentTask> tasks) : map_(&map), tasks_(std::move(tasks)), heuristics_(map) {
    validate_tasks(map, tasks_);
  }

  const GridMap& map() const { return *map_; }
  const std::vector<AgentTask>& tasks() const { return tasks_; }
  int agent_count() const { return static_cast<int>(tasks_.size()); }
  const AgentTask& task(int agent) const { return tasks_[agent]; }
  const HeuristicTable& heuristic(int agent) const { return heuristics_.get(map_->location(tasks_[agent].goal)); }
  const HeuristicCache& heuristics() const { return heuristics_; }

 private:
  const GridMap* map_;
  std::vector<AgentTask> tasks_;
  HeuristicCache heuristics_;
};

}  // namespace wcbs
