#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "wcbs/config.hpp"
#include "wcbs/constraints.hpp"
#include "wcbs/deadline.hpp"
#include "wcbs/grid.hpp"
#include "wcbs/heuristic.hpp"

namespace wcbs {

// Occupancy of the other agents' paths, used to score transitions by the
// number of collisions they cause. Agents are parked at their final cell
// after arrival. Null entries in `paths` are skipped.
class ConflictAvoidanceTable {
 public:
  ConflictAvoidanceTable() = default;
  explicit ConflictAvoidanceTable(std::span<const Path* const> paths);

  bool empty() const { return agents_ == 0; }
  // Vertex plus edge collisions of a single move from -> to arriving at t.
  int transition_conflicts(Location from, Location to, int t) const;
  // Collisions an agent parked at `goal` from t would suffer later: one per
  // visit by a moving agent and one per agent arriving there after t.
  int future_collisions(Location goal, int t) const;

 private:
  static std::uint64_t vkey(Location loc, int t) { return (static_cast<std::uint64_t>(t) << 32) | static_cast<std::uint32_t>(loc); }
  static std::uint64_t ekey(Location from, Location to, int t) {
    return (static_cast<std::uint64_t>(t) << 40) | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 20) |
           static_cast<std::uint32_t>(to);
  }

  int agents_ = 0;
  std::unordered_map<std::uint64_t, int> timed_;              // (loc, t) for t before arrival
  std::unordered_map<std::uint64_t, int> moves_;              // (from, to, t) moves
  std::unordered_map<Location, std::vector<int>> parked_;     // loc -> sorted arrival times
  std::unordered_map<Location, std::vector<int>> timed_at_;   // loc -> sorted pre-arrival visit times
};

// Direct definition over raw paths; the table above is the fast route.
int count_transition_conflicts(Location from, Location to, int t, std::span<const Path* const> other_paths);

enum class SearchStatus { found, no_solution, timeout };

struct LowLevelResult {
  SearchStatus status = SearchStatus::no_solution;
  Path path;
  double lb = 0.0;
  int conflicts = 0;  // collisions along the returned path, including parking
  std::int64_t expansions = 0;
  std::int64_t generated = 0;

  bool found() const { return status == SearchStatus::found; }
};

// Optional instrumentation; filled only when passed in LowLevelOptions.
struct LowLevelTrace {
  struct Expansion {
    Location loc;
    int t;
    int h;
    int c;
    double f_open;
    double f_focal;
    // Lexicographic (c, F_open) minimum over OPEN just before this pop.
    int open_min_c;
    double open_min_f;
    std::size_t open_size;
    std::size_t focal_size;
  };
  struct Generated {
    Location loc;
    int t;
    int g;
    int h;
    int c;
    double f_open;
    double f_focal;
  };
  struct Bound {
    double f_best;
    double g_min;
    double naive;
    double improved;
    double lb;  // running maximum after this update
  };

  std::vector<Expansion> expansions;
  std::vector<Generated> generated;
  std::vector<Bound> bounds;
  // FOCAL matches a literal rescan of OPEN at every update point.
  bool focal_matches_rescan = true;
  // Every FOCAL node is in OPEN and F_open <= w_f * F_best for the current F_best.
  bool focal_exact = true;
  bool f_best_monotone = true;
  int focal_checks = 0;
};

struct LowLevelOptions {
  // Prune every successor that collides with another agent (prioritized planning).
  bool forbid_conflicts = false;
  const Deadline* deadline = nullptr;
  LowLevelTrace* trace = nullptr;
};

// Space-time focal search for one agent under `constraints`. OPEN is keyed by
// f_open, FOCAL by f_focal over the OPEN nodes with F_open <= w_f * F_best.
// A found path satisfies path.cost() <= w_so * lb.
LowLevelResult low_level_search(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints,
                                std::span<const Path* const> other_paths, const SolverConfig& cfg,
                                const HeuristicTable& h_table, const LowLevelOptions& options = {});

// Same search, against a prebuilt avoidance table.
LowLevelResult low_level_search(const GridMap& map, const AgentTask& task, std::span<const Constraint> constraints,
                                const ConflictAvoidanceTable& others, const SolverConfig& cfg,
                                const HeuristicTable& h_table, const LowLevelOptions& options = {});

}  // namespace wcbs
