#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "wcbs/grid.hpp"

namespace wcbs {

// Cells indexed by timestep 0..T; the agent arrives at cells.back() at T and
// stays there afterwards.
struct Path {
  std::vector<Location> cells;

  int cost() const { return static_cast<int>(cells.size()) - 1; }
  bool empty() const { return cells.empty(); }
  Location at(int t) const { return t < static_cast<int>(cells.size()) ? cells[t] : cells.back(); }
  friend bool operator==(const Path&, const Path&) = default;
};

enum class ConstraintKind : std::uint8_t { vertex, edge };

// vertex: agent may not be at `loc` at time t.
// edge: agent may not move from -> to arriving at time t (t >= 1).
struct Constraint {
  int agent = 0;
  ConstraintKind kind = ConstraintKind::vertex;
  Location from = -1;  // edge only
  Location loc = -1;   // vertex cell, or edge destination
  int t = 0;

  static Constraint vertex(int agent, Location loc, int t) { return {agent, ConstraintKind::vertex, -1, loc, t}; }
  static Constraint edge(int agent, Location from, Location to, int t) { return {agent, ConstraintKind::edge, from, to, t}; }

  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

std::string to_string(const Constraint& c, const GridMap& map);

// Per-agent lookup built from a constraint list.
class ConstraintTable {
 public:
  ConstraintTable() = default;
  ConstraintTable(int agent, std::span<const Constraint> constraints);

  bool vertex_blocked(Location loc, int t) const;
  bool edge_blocked(Location from, Location to, int t) const;
  // Earliest time an agent may stop at `goal` and stay forever.
  int goal_hold_time(Location goal) const;
  int latest_timestep() const { return latest_; }
  bool empty() const { return vertices_.empty() && edges_.empty(); }

 private:
  static std::uint64_t vkey(Location loc, int t) { return (static_cast<std::uint64_t>(t) << 32) | static_cast<std::uint32_t>(loc); }
  static std::uint64_t ekey(Location from, Location to, int t) {
    // Exact for maps below 2^20 cells.
    return (static_cast<std::uint64_t>(t) << 40) | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 20) |
           static_cast<std::uint32_t>(to);
  }

  std::unordered_set<std::uint64_t> vertices_;
  std::unordered_set<std::uint64_t> edges_;
  std::vector<std::pair<Location, int>> vertex_list_;
  int latest_ = 0;
};

// True iff `path` violates none of the constraints naming `agent`.
bool satisfies(const Path& path, int agent, std::span<const Constraint> constraints);

}  // namespace wcbs
