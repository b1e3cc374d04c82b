#pragma once

#include <array>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "wcbs/constraints.hpp"

namespace wcbs {

enum class Cardinality : std::uint8_t { cardinal, semi_cardinal, non_cardinal, unknown };

std::string to_string(Cardinality c);

// Collision between agents a1 < a2.
//   vertex: both at `loc` at time t.
//   edge:   a1 moves loc -> loc2 and a2 moves loc2 -> loc, arriving at t.
struct Conflict {
  int a1 = 0;
  int a2 = 0;
  ConstraintKind kind = ConstraintKind::vertex;
  Location loc = -1;
  Location loc2 = -1;
  int t = 0;
  Cardinality cardinality = Cardinality::unknown;

  bool same_event(const Conflict& o) const {
    return a1 == o.a1 && a2 == o.a2 && kind == o.kind && loc == o.loc && loc2 == o.loc2 && t == o.t;
  }
};

// Ordering used for the detection output: (t, a1, a2), then kind and cells.
inline bool detection_order(const Conflict& x, const Conflict& y) {
  if (x.t != y.t) return x.t < y.t;
  if (x.a1 != y.a1) return x.a1 < y.a1;
  if (x.a2 != y.a2) return x.a2 < y.a2;
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.loc != y.loc) return x.loc < y.loc;
  return x.loc2 < y.loc2;
}

// All vertex and edge collisions of one pair, agents parked after arrival.
void pair_conflicts(int i, int j, const Path& pi, const Path& pj, std::vector<Conflict>& out);

// Every collision among all pairs, sorted by detection_order. Empty iff the
// paths form a valid solution. The OpenMP version splits the pair loop across
// threads; the serial version is the reference.
std::vector<Conflict> detect_conflicts(std::span<const Path> paths);
std::vector<Conflict> detect_conflicts_serial(std::span<const Path> paths);
std::vector<Conflict> detect_conflicts(std::span<const Path* const> paths);

// Collisions between `agent` and every other agent, sorted.
std::vector<Conflict> detect_conflicts_for_agent(int agent, std::span<const Path* const> paths);

// The two branches: constraint on a1, constraint on a2.
std::array<Constraint, 2> split_conflict(const Conflict& conflict);

}  // namespace wcbs
