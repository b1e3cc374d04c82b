// Serial reference vs OpenMP kernels: pairwise conflict detection,
// heuristic-table prefetch, and a small benchmark sweep.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "wcbs/bench.hpp"
#include "wcbs/conflicts.hpp"
#include "wcbs/heuristic.hpp"
#include "wcbs/prioritized.hpp"

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

wcbs::GridMap open_map(int side) {
  return wcbs::GridMap(side, side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side, 1), "open");
}

std::vector<wcbs::AgentTask> random_tasks(const wcbs::GridMap& map, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, map.cell_count() - 1);
  std::vector<wcbs::AgentTask> tasks;
  std::vector<bool> used_start(map.cell_count()), used_goal(map.cell_count());
  while (static_cast<int>(tasks.size()) < n) {
    const int s = cell(rng);
    const int g = cell(rng);
    if (used_start[s] || used_goal[g]) continue;
    used_start[s] = used_goal[g] = true;
    tasks.push_back({static_cast<int>(tasks.size()), map.cell(s), map.cell(g)});
  }
  return tasks;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  const auto map = open_map(64);
  const auto tasks = random_tasks(map, 400, 7);
  // Independent shortest paths give many collisions to detect.
  std::vector<wcbs::Path> paths;
  {
    const wcbs::Instance instance(map, tasks);
    for (int i = 0; i < instance.agent_count(); ++i) {
      auto r = wcbs::low_level_search(map, instance.task(i), {}, std::span<const wcbs::Path* const>{},
                                      wcbs::SolverConfig::vanilla_focal(1.0), instance.heuristic(i));
      paths.push_back(std::move(r.path));
    }
  }
  std::size_t serial_count = 0, parallel_count = 0;
  const double t_serial = time_best_of(5, [&] { serial_count = wcbs::detect_conflicts_serial(paths).size(); });
  const double t_parallel = time_best_of(5, [&] { parallel_count = wcbs::detect_conflicts(std::span<const wcbs::Path>(paths)).size(); });
  std::printf("detect_conflicts  agents=%zu  serial %.4fs  omp %.4fs  speedup %.2f  conflicts %zu/%zu\n", paths.size(),
              t_serial, t_parallel, t_serial / t_parallel, serial_count, parallel_count);

  std::vector<wcbs::Location> goals;
  for (const auto& t : tasks) goals.push_back(map.location(t.goal));
  const double h_serial = time_best_of(3, [&] { wcbs::HeuristicCache(map).prefetch_serial(goals); });
  const double h_parallel = time_best_of(3, [&] { wcbs::HeuristicCache(map).prefetch(goals); });
  std::printf("heuristic prefetch goals=%zu  serial %.4fs  omp %.4fs  speedup %.2f\n", goals.size(), h_serial, h_parallel,
              h_serial / h_parallel);

  const auto small = open_map(24);
  const auto scenario = random_tasks(small, 60, 11);
  wcbs::RunSpec spec;
  spec.agent_counts = {20, 30};
  spec.seeds = {0, 1, 2, 3};
  spec.methods = {wcbs::make_method("vanilla", 2.0, 1.0, 0.0, false, "focal", false),
                  wcbs::make_method("wf", 2.0, 4.0, 5.0, false, "focal", false)};
  spec.timeout_s = 10.0;
  spec.workers = 1;
  const double s_serial = time_best_of(1, [&] { wcbs::run_benchmark(spec, small, scenario, nullptr); });
  spec.workers = omp_get_max_threads();
  const double s_parallel = time_best_of(1, [&] { wcbs::run_benchmark(spec, small, scenario, nullptr); });
  std::printf("benchmark sweep   runs=%zu  1 worker %.4fs  %d workers %.4fs  speedup %.2f\n",
              spec.agent_counts.size() * spec.seeds.size() * spec.methods.size(), s_serial, spec.workers, s_parallel,
              s_serial / s_parallel);
  return serial_count == parallel_count ? 0 : 1;
}
