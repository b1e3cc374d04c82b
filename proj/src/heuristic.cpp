#include "wcbs/heuristic.hpp"

#include <mutex>
#include <queue>
#include <stdexcept>

namespace wcbs {

HeuristicTable build_heuristic_table(const GridMap& map, Cell goal) {
  if (!map.passable(goal)) throw std::invalid_argument("heuristic goal cell is blocked");
  std::vector<int> dist(map.cell_count(), HeuristicTable::kUnreachable);
  const Location g = map.location(goal);
  std::queue<Location> frontier;
  dist[g] = 0;
  frontier.push(g);
  Location nbr[4];
  while (!frontier.empty()) {
    const Location u = frontier.front();
    frontier.pop();
    const int n = map.neighbors(u, nbr);
    for (int k = 0; k < n; ++k) {
      if (dist[nbr[k]] == HeuristicTable::kUnreachable) {
        dist[nbr[k]] = dist[u] + 1;
        frontier.push(nbr[k]);
      }
    }
  }
  return HeuristicTable(g, std::move(dist));
}

const HeuristicTable& HeuristicCache::get(Location goal) const {
  {
    std::shared_lock lock(mutex_);
    auto it = tables_.find(goal);
    if (it != tables_.end()) return *it->second;
  }
  auto table = std::make_unique<HeuristicTable>(build_heuristic_table(*map_, map_->cell(goal)));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = tables_.try_emplace(goal, std::move(table));
  return *it->second;
}

void HeuristicCache::prefetch(std::span<const Location> goals) const {
  const auto n = static_cast<long>(goals.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) get(goals[i]);
}

void HeuristicCache::prefetch_serial(std::span<const Location> goals) const {
  for (auto g : goals) get(g);
}

std::size_t HeuristicCache::size() const {
  std::shared_lock lock(mutex_);
  return tables_.size();
}

}  // namespace wcbs
