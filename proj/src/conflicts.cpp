#include "wcbs/conflicts.hpp"

#include <algorithm>

namespace wcbs {

std::string to_string(Cardinality c) {
  switch (c) {
    case Cardinality::cardinal: return "cardinal";
    case Cardinality::semi_cardinal: return "semi-cardinal";
    case Cardinality::non_cardinal: return "non-cardinal";
    case Cardinality::unknown: return "unknown";
  }
  return "?";
}

void pair_conflicts(int i, int j, const Path& pi, const Path& pj, std::vector<Conflict>& out) {
  if (pi.empty() || pj.empty()) return;
  const int a1 = std::min(i, j);
  const int a2 = std::max(i, j);
  const Path& p1 = i < j ? pi : pj;
  const Path& p2 = i < j ? pj : pi;
  const int horizon = std::max(p1.cost(), p2.cost());
  for (int t = 0; t <= horizon; ++t) {
    const Location u1 = p1.at(t);
    const Location u2 = p2.at(t);
    if (u1 == u2) {
      out.push_back(Conflict{a1, a2, ConstraintKind::vertex, u1, -1, t, Cardinality::unknown});
      continue;
    }
    if (t >= 1) {
      const Location v1 = p1.at(t - 1);
      const Location v2 = p2.at(t - 1);
      if (v1 == u2 && v2 == u1) out.push_back(Conflict{a1, a2, ConstraintKind::edge, v1, u1, t, Cardinality::unknown});
    }
  }
}

namespace {

void sort_conflicts(std::vector<Conflict>& conflicts) { std::sort(conflicts.begin(), conflicts.end(), detection_order); }

}  // namespace

std::vector<Conflict> detect_conflicts_serial(std::span<const Path> paths) {
  std::vector<Conflict> out;
  const int n = static_cast<int>(paths.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_conflicts(i, j, paths[i], paths[j], out);
  sort_conflicts(out);
  return out;
}

std::vector<Conflict> detect_conflicts(std::span<const Path* const> paths) {
  const int n = static_cast<int>(paths.size());
  std::vector<Conflict> out;
#pragma omp parallel if (n > 32)
  {
    std::vector<Conflict> local;
#pragma omp for schedule(dynamic, 4) nowait
    for (int i = 0; i < n; ++i) {
      if (paths[i] == nullptr) continue;
      for (int j = i + 1; j < n; ++j)
        if (paths[j] != nullptr) pair_conflicts(i, j, *paths[i], *paths[j], local);
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  sort_conflicts(out);
  return out;
}

std::vector<Conflict> detect_conflicts(std::span<const Path> paths) {
  std::vector<const Path*> ptrs;
  ptrs.reserve(paths.size());
  for (const auto& p : paths) ptrs.push_back(&p);
  return detect_conflicts(std::span<const Path* const>(ptrs));
}

std::vector<Conflict> detect_conflicts_for_agent(int agent, std::span<const Path* const> paths) {
  std::vector<Conflict> out;
  for (int j = 0; j < static_cast<int>(paths.size()); ++j)
    if (j != agent && paths[j] != nullptr && paths[agent] != nullptr) pair_conflicts(agent, j, *paths[agent], *paths[j], out);
  sort_conflicts(out);
  return out;
}

std::array<Constraint, 2> split_conflict(const Conflict& c) {
  if (c.kind == ConstraintKind::vertex)
    return {Constraint::vertex(c.a1, c.loc, c.t), Constraint::vertex(c.a2, c.loc, c.t)};
  return {Constraint::edge(c.a1, c.loc, c.loc2, c.t), Constraint::edge(c.a2, c.loc2, c.loc, c.t)};
}

}  // namespace wcbs
