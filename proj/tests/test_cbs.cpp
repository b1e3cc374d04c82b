#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wcbs/cbs.hpp"

using namespace wcbs;

namespace {

constexpr double kSlack = 1e-9;

struct Problem {
  GridMap map;
  std::vector<AgentTask> tasks;
};

std::optional<Problem> random_problem(std::mt19937_64& rng, int w, int h, double obstacles, int agents) {
  Problem p{oracle::random_grid(w, h, obstacles, rng), {}};
  try {
    p.tasks = oracle::random_tasks(p.map, agents, rng);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  return p;
}

std::vector<SolverConfig> focal_configs(double w_so) {
  return {
      SolverConfig::vanilla_focal(w_so),
      SolverConfig::weighted_open(w_so, w_so),
      SolverConfig::weighted_open(w_so, std::max(1.0, w_so / 1.5), true),
      SolverConfig::weighted_focal(w_so, 1, 5),
      SolverConfig::weighted_focal(w_so, 4, 5),
      SolverConfig::weighted_focal(w_so, 8, 2.5),
  };
}

void check_solution(const GridMap& map, const std::vector<AgentTask>& tasks, const Solution& sol) {
  REQUIRE(sol.solved());
  REQUIRE(sol.paths.size() == tasks.size());
  int soc = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& p = sol.paths[i];
    CHECK(p.cells.front() == map.location(tasks[i].start));
    CHECK(p.cells.back() == map.location(tasks[i].goal));
    for (std::size_t t = 1; t < p.cells.size(); ++t) CHECK(map.adjacent_or_same(p.cells[t - 1], p.cells[t]));
    soc += p.cost();
  }
  CHECK(soc == sol.sum_of_costs);
  CHECK(oracle::brute_force_collisions(sol.paths).empty());
  CHECK(detect_conflicts(sol.paths).empty());
}

CTNode make_root(const Instance& inst, const SolverConfig& cfg) {
  CTNode root;
  std::vector<const Path*> planned(inst.agent_count(), nullptr);
  root.paths.resize(inst.agent_count());
  for (int i = 0; i < inst.agent_count(); ++i) {
    auto r = low_level_search(inst.map(), inst.task(i), {}, planned, cfg, inst.heuristic(i));
    REQUIRE(r.found());
    root.lbs.push_back(r.lb);
    root.lb_sum += r.lb;
    root.cost += r.path.cost();
    root.paths[i] = std::make_shared<const Path>(std::move(r.path));
    planned[i] = root.paths[i].get();
  }
  root.conflicts = detect_conflicts(std::span<const Path* const>(planned));
  return root;
}

}  // namespace

TEST_CASE("one agent is solved at the root") {
  const auto map = oracle::grid_from_rows({
      ".....",
      ".@@@.",
      ".....",
  });
  const std::vector<AgentTask> tasks{{0, {1, 0}, {1, 4}}};
  std::vector<SolverConfig> cfgs = focal_configs(2);
  cfgs.push_back(SolverConfig::optimal());
  for (const auto& cfg : cfgs) {
    const auto sol = solve(map, tasks, cfg);
    check_solution(map, tasks, sol);
    CHECK(sol.stats.ct_generated == 1);
    CHECK(sol.stats.ct_expanded == 0);
    CHECK(sol.sum_of_costs == oracle::optimal_constrained_cost(map, tasks[0], {}));
  }
}

TEST_CASE("two agents crossing a 3x3 grid, optimal CBS") {
  const auto map = oracle::open_grid(3, 3);
  const std::vector<AgentTask> tasks{{0, {1, 0}, {1, 2}}, {1, {0, 1}, {2, 1}}};
  const auto sol = solve(map, tasks, SolverConfig::optimal());
  check_solution(map, tasks, sol);
  CHECK(sol.sum_of_costs == oracle::joint_optimal_soc(map, tasks));
  CHECK(sol.sum_of_costs == 5);
  CHECK(sol.lb_sum == sol.sum_of_costs);
}

TEST_CASE("optimal CBS equals the joint-state optimum on two-agent problems") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 60) {
    const auto p = random_problem(rng, 5, 5, 0.2, 2);
    if (!p) continue;
    const int opt = oracle::joint_optimal_soc(p->map, p->tasks);
    auto cfg = SolverConfig::optimal();
    cfg.timeout_s = 30;
    const auto sol = solve(p->map, p->tasks, cfg);
    if (opt < 0) {
      CHECK_FALSE(sol.solved());
      continue;
    }
    check_solution(p->map, p->tasks, sol);
    CHECK(sol.sum_of_costs == opt);
    cfg.prioritize_conflicts = true;
    const auto pc = solve(p->map, p->tasks, cfg);
    REQUIRE(pc.solved());
    CHECK(pc.sum_of_costs == opt);
    ++checked;
  }
}

TEST_CASE("bounded suboptimality on random 8x8 problems") {
  std::mt19937_64 rng(32);
  int solved = 0;
  for (int k = 0; k < 40; ++k) {
    const int agents = 2 + k % 3;
    const auto p = random_problem(rng, 8, 8, 0.15, agents);
    if (!p) continue;
    auto opt_cfg = SolverConfig::optimal();
    opt_cfg.timeout_s = 30;
    const auto best = solve(p->map, p->tasks, opt_cfg);
    if (!best.solved()) continue;
    if (agents <= 3) {
      const int joint = oracle::joint_optimal_soc(p->map, p->tasks, 2'000'000);
      if (joint >= 0) CHECK(best.sum_of_costs == joint);
    }
    for (double w_so : {1.2, 2.0}) {
      for (auto cfg : focal_configs(w_so)) {
        if (cfg.variant == Variant::weighted_open && cfg.w_h > w_so) continue;
        for (bool pc : {false, true}) {
          cfg.prioritize_conflicts = pc;
          INFO("variant " << static_cast<int>(cfg.variant) << " w_h " << cfg.w_h << " r " << cfg.r << " pc " << pc << " improved " << cfg.improved_lb);
          cfg.timeout_s = 30;
          const auto sol = solve(p->map, p->tasks, cfg);
          check_solution(p->map, p->tasks, sol);
          CHECK(sol.sum_of_costs <= w_so * best.sum_of_costs);
          CHECK(sol.lb_sum <= best.sum_of_costs + kSlack);
          CHECK(sol.sum_of_costs <= w_so * sol.lb_sum + kSlack);
          ++solved;
        }
      }
    }
  }
  CHECK(solved > 300);
}

TEST_CASE("constraint-tree invariants") {
  std::mt19937_64 rng(33);
  int nodes = 0;
  for (int k = 0; k < 30; ++k) {
    const auto p = random_problem(rng, 7, 7, 0.2, 4);
    if (!p) continue;
    const Instance inst(p->map, p->tasks);
    for (const auto& cfg : {SolverConfig::vanilla_focal(1.5), SolverConfig::weighted_open(2, 2, true),
                            SolverConfig::weighted_focal(2, 4, 5)}) {
      SolveHooks hooks;
      hooks.on_node_generated = [&](const CTNode& n) {
        ++nodes;
        CHECK(n.cost >= n.lb_sum - kSlack);
        double sum = 0;
        int cost = 0;
        for (int a = 0; a < inst.agent_count(); ++a) {
          sum += n.lbs[a];
          cost += n.paths[a]->cost();
          CHECK(satisfies(*n.paths[a], a, n.constraints_for(a)));
          CHECK(n.paths[a]->cost() <= cfg.w_so * n.lbs[a] + kSlack);
        }
        CHECK(sum == doctest::Approx(n.lb_sum));
        CHECK(cost == n.cost);
        if (n.parent != nullptr) {
          CHECK(n.lb_sum >= n.parent->lb_sum - kSlack);
          CHECK(n.constraints().size() == n.parent->constraints().size() + 1);
          const int a = n.added->agent;
          CHECK(n.lbs[a] >= n.parent->lbs[a]);
          for (int b = 0; b < inst.agent_count(); ++b)
            if (b != a) CHECK(n.paths[b] == n.parent->paths[b]);
        }
        std::vector<Path> copies;
        for (const auto& path : n.paths) copies.push_back(*path);
        const auto expected = detect_conflicts(copies);
        REQUIRE(expected.size() == n.conflicts.size());
        for (std::size_t i = 0; i < expected.size(); ++i) CHECK(expected[i].same_event(n.conflicts[i]));
      };
      auto c = cfg;
      c.timeout_s = 20;
      solve(inst, c, &hooks);
    }
  }
  CHECK(nodes > 100);
}

TEST_CASE("replan_child") {
  const auto map = oracle::open_grid(5, 5);
  const Instance inst(map, {{0, {2, 0}, {2, 4}}, {1, {0, 2}, {4, 2}}});
  const auto cfg = SolverConfig::vanilla_focal(1);
  const CTNode root = make_root(inst, cfg);

  SUBCASE("inactive constraint keeps the cost") {
    const auto child = replan_child(inst, root, Constraint::vertex(0, map.location({4, 4}), 2), cfg);
    REQUIRE(child);
    CHECK(child->paths[0]->cost() == root.paths[0]->cost());
    CHECK(child->cost == root.cost);
    CHECK(child->paths[1] == root.paths[1]);
  }
  SUBCASE("active constraint raises nothing below the parent bound") {
    const Location on_path = root.paths[0]->at(2);
    const auto child = replan_child(inst, root, Constraint::vertex(0, on_path, 2), cfg);
    REQUIRE(child);
    CHECK(child->paths[0]->at(2) != on_path);
    CHECK(child->lbs[0] >= root.lbs[0]);
    CHECK(child->lb_sum >= root.lb_sum);
    CHECK(child->added == Constraint::vertex(0, on_path, 2));
    CHECK(child->depth == 1);
  }
  SUBCASE("no path gives no child") {
    std::vector<Constraint> wall;
    CTNode parent = root;
    const auto blocked = replan_child(inst, parent, Constraint::vertex(0, map.location({2, 0}), 0), cfg);
    CHECK_FALSE(blocked);
  }
}

TEST_CASE("child lb_sum never drops below the parent's") {
  std::mt19937_64 rng(34);
  int checked = 0;
  for (int k = 0; k < 30; ++k) {
    const auto p = random_problem(rng, 8, 8, 0.2, 5);
    if (!p) continue;
    const Instance inst(p->map, p->tasks);
    for (const auto& cfg : {SolverConfig::weighted_open(2, 2), SolverConfig::weighted_open(2, 1.5, true)}) {
      const CTNode root = make_root(inst, cfg);
      for (const auto& c : root.conflicts) {
        for (const auto& k0 : split_conflict(c)) {
          const auto child = replan_child(inst, root, k0, cfg);
          if (!child) continue;
          CHECK(child->lb_sum >= root.lb_sum);
          CHECK(child->lbs[k0.agent] == std::max(root.lbs[k0.agent], child->lbs[k0.agent]));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("choose_conflict") {
  std::vector<Conflict> cs{
      {0, 1, ConstraintKind::vertex, 3, -1, 2, Cardinality::non_cardinal},
      {1, 2, ConstraintKind::vertex, 4, -1, 5, Cardinality::cardinal},
      {0, 2, ConstraintKind::vertex, 5, -1, 4, Cardinality::semi_cardinal},
      {0, 3, ConstraintKind::vertex, 6, -1, 1, Cardinality::unknown},
      {2, 3, ConstraintKind::vertex, 7, -1, 5, Cardinality::cardinal},
  };
  CHECK(choose_conflict(cs, false).t == 1);
  const auto& pc = choose_conflict(cs, true);
  CHECK(pc.cardinality == Cardinality::cardinal);
  CHECK(pc.a1 == 1);
  cs[1].cardinality = cs[4].cardinality = Cardinality::unknown;
  CHECK(choose_conflict(cs, true).cardinality == Cardinality::semi_cardinal);
  cs[2].cardinality = Cardinality::unknown;
  CHECK(choose_conflict(cs, true).loc == 3);
}

TEST_CASE("classification stats are counted per expansion when prioritizing") {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_problem(rng, 6, 6, 0.2, 4);
    if (!p) continue;
    auto cfg = SolverConfig::vanilla_focal(1.5);
    cfg.prioritize_conflicts = true;
    const auto sol = solve(p->map, p->tasks, cfg);
    REQUIRE(sol.solved());
    const auto& s = sol.stats;
    CHECK(s.cardinal + s.semi_cardinal + s.non_cardinal + s.unknown == s.ct_expanded);
    cfg.prioritize_conflicts = false;
    const auto plain = solve(p->map, p->tasks, cfg);
    CHECK(plain.stats.cardinal + plain.stats.semi_cardinal + plain.stats.non_cardinal + plain.stats.unknown == 0);
  }
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(36);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_problem(rng, 8, 8, 0.2, 6);
    if (!p) continue;
    for (auto cfg : focal_configs(1.5)) {
      cfg.prioritize_conflicts = k % 2 == 0;
      const auto a = solve(p->map, p->tasks, cfg);
      const auto b = solve(p->map, p->tasks, cfg);
      CHECK(a.outcome == b.outcome);
      CHECK(a.paths == b.paths);
      CHECK(a.lb_sum == b.lb_sum);
      CHECK(same_counts(a.stats, b.stats));
    }
  }
}

TEST_CASE("infeasible and timeout outcomes") {
  const auto walled = oracle::grid_from_rows({".@."});
  const auto none = solve(walled, {{0, {0, 0}, {0, 2}}}, SolverConfig::vanilla_focal(2));
  CHECK(none.outcome == Outcome::infeasible);

  // Two agents swapping in a dead-end corridor can never succeed; the tree
  // grows until the budget runs out.
  const auto corridor = oracle::grid_from_rows({"..."});
  auto cfg = SolverConfig::vanilla_focal(2);
  cfg.timeout_s = 0.3;
  const auto sol = solve(corridor, {{0, {0, 0}, {0, 2}}, {1, {0, 2}, {0, 0}}}, cfg);
  CHECK(sol.outcome == Outcome::timeout);
  CHECK(sol.stats.ct_generated > 1);
  CHECK(sol.stats.wall_time_s >= 0.3);
  CHECK(to_string(sol.outcome) == "timeout");

  CHECK_THROWS_AS(solve(corridor, {{0, {0, 0}, {0, 2}}}, SolverConfig::weighted_open(1.5, 2)), std::invalid_argument);
}
