#include "wcbs/constraints.hpp"

#include <algorithm>
#include <stdexcept>

namespace wcbs {

std::string to_string(const Constraint& c, const GridMap& map) {
  auto fmt = [&map](Location loc) {
    const Cell cell = map.cell(loc);
    return "(" + std::to_string(cell.row) + "," + std::to_string(cell.col) + ")";
  };
  if (c.kind == ConstraintKind::vertex)
    return "a" + std::to_string(c.agent) + " !at " + fmt(c.loc) + " t=" + std::to_string(c.t);
  return "a" + std::to_string(c.agent) + " !move " + fmt(c.from) + "->" + fmt(c.loc) + " t=" + std::to_string(c.t);
}

ConstraintTable::ConstraintTable(int agent, std::span<const Constraint> constraints) {
  for (const auto& c : constraints) {
    if (c.agent != agent) continue;
    latest_ = std::max(latest_, c.t);
    if (c.kind == ConstraintKind::vertex) {
      vertices_.insert(vkey(c.loc, c.t));
      vertex_list_.emplace_back(c.loc, c.t);
    } else {
      if (c.t < 1) throw std::invalid_argument("edge constraint needs t >= 1");
      edges_.insert(ekey(c.from, c.loc, c.t));
    }
  }
}

bool ConstraintTable::vertex_blocked(Location loc, int t) const {
  return !vertices_.empty() && vertices_.count(vkey(loc, t)) != 0;
}

bool ConstraintTable::edge_blocked(Location from, Location to, int t) const {
  return !edges_.empty() && edges_.count(ekey(from, to, t)) != 0;
}

int ConstraintTable::goal_hold_time(Location goal) const {
  int hold = 0;
  for (const auto& [loc, t] : vertex_list_)
    if (loc == goal) hold = std::max(hold, t + 1);
  return hold;
}

bool satisfies(const Path& path, int agent, std::span<const Constraint> constraints) {
  if (path.empty()) return false;
  for (const auto& c : constraints) {
    if (c.agent != agent) continue;
    if (c.kind == ConstraintKind::vertex) {
      if (path.at(c.t) == c.loc) return false;
    } else if (c.t <= path.cost() && path.at(c.t - 1) == c.from && path.at(c.t) == c.loc) {
      return false;
    }
  }
  return true;
}

}  // namespace wcbs
