#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "wcbs/grid.hpp"

namespace wcbs {

// Exact 4-connected distance to `goal` ignoring agents.
class HeuristicTable {
 public:
  static constexpr int kUnreachable = -1;

  HeuristicTable(Location goal, std::vector<int> dist) : goal_(goal), dist_(std::move(dist)) {}

  Location goal() const { return goal_; }
  int operator[](Location loc) const { return dist_[loc]; }
  bool reachable(Location loc) const { return dist_[loc] != kUnreachable; }
  const std::vector<int>& distances() const { return dist_; }

 private:
  Location goal_;
  std::vector<int> dist_;
};

// Throws std::invalid_argument if goal is blocked.
HeuristicTable build_heuristic_table(const GridMap& map, Cell goal);

// Lazily built tables, one per distinct goal. Safe for concurrent readers.
class HeuristicCache {
 public:
  explicit HeuristicCache(const GridMap& map) : map_(&map) {}

  const HeuristicTable& get(Location goal) const;

  // Builds tables for all given goals. The parallel version runs one BFS per
  // OpenMP thread; the serial version is the reference.
  void prefetch(std::span<const Location> goals) const;
  void prefetch_serial(std::span<const Location> goals) const;

  std::size_t size() const;

 private:
  const GridMap* map_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Location, std::unique_ptr<HeuristicTable>> tables_;
};

}  // namespace wcbs
