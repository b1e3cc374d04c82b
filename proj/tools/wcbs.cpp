// Command-line front end: benchmark sweeps, result summaries, single solves.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "wcbs/bench.hpp"
#include "wcbs/cbs.hpp"
#include "wcbs/prioritized.hpp"

namespace {

struct MethodFlags {
  std::vector<std::string> variants{"vanilla"};
  double w_so = 2.0;
  double w_h = 1.0;
  double r = 5.0;
  bool improved_lb = false;
  bool prioritize_conflicts = false;
  std::string high_level = "focal";

  void add_to(CLI::App* app) {
    app->add_option("--variant", variants, "vanilla, wo, wf, pp, cbspp (repeat or comma-separate for several)")
        ->delimiter(',');
    app->add_option("--wso", w_so, "suboptimality factor");
    app->add_option("--wh", w_h, "cost-to-go weight");
    app->add_option("--r", r, "conflict-to-heuristic weight ratio (wf)");
    app->add_flag("--improved-lb", improved_lb, "improved lower bound (wo)");
    app->add_flag("--prioritize-conflicts", prioritize_conflicts, "branch on cardinal conflicts first");
    app->add_option("--high-level", high_level, "optimal or focal")->check(CLI::IsMember({"optimal", "focal"}));
  }

  std::vector<wcbs::MethodSpec> methods() const {
    std::vector<wcbs::MethodSpec> out;
    for (const auto& v : variants) out.push_back(wcbs::make_method(v, w_so, w_h, r, improved_lb, high_level, prioritize_conflicts));
    return out;
  }
};

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-suboptimal multi-agent path finding with weighted low-level search"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "agent-count sweep over seeds and methods, CSV rows");
  wcbs::RunSpec spec;
  std::string agents_text = "10";
  std::string seeds_text = "0,1,2";
  MethodFlags run_flags;
  run->add_option("--map", spec.map_path, "MovingAI .map file")->required();
  run->add_option("--scen", spec.scen_path, "MovingAI .scen file")->required();
  run->add_option("--agents", agents_text, "LIST or START:STEP:MAX");
  run->add_option("--seeds", seeds_text, "comma-separated seeds");
  run->add_option("--timeout", spec.timeout_s, "seconds per instance");
  run->add_option("--out", spec.out_path, "CSV output path ('-' for stdout)");
  run->add_option("--workers", spec.workers, "concurrent runs");
  run_flags.add_to(run);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "speedup table against a baseline method");
  std::vector<std::string> inputs;
  std::string baseline;
  std::string summary_out;
  std::string means_out;
  summarize->add_option("--in", inputs, "results CSV (repeatable)")->required();
  summarize->add_option("--baseline", baseline, "baseline method label, e.g. vanilla@2")->required();
  summarize->add_option("--out", summary_out, "summary CSV path ('-' for stdout)");
  summarize->add_option("--means-out", means_out, "per-seed-mean CSV path");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance and print its paths");
  std::string map_path;
  std::string scen_path;
  int agents = 10;
  std::uint64_t seed = 0;
  double timeout = 10.0;
  MethodFlags solve_flags;
  solve->add_option("--map", map_path)->required();
  solve->add_option("--scen", scen_path)->required();
  solve->add_option("--agents", agents);
  solve->add_option("--seed", seed);
  solve->add_option("--timeout", timeout);
  solve_flags.add_to(solve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      spec.agent_counts = wcbs::parse_agent_counts(agents_text);
      spec.seeds = wcbs::parse_seeds(seeds_text);
      spec.methods = run_flags.methods();
      wcbs::run_benchmark(spec);
    } else if (summarize->parsed()) {
      std::vector<wcbs::ResultRow> rows;
      for (const auto& in : inputs) {
        auto part = wcbs::parse_results_csv(wcbs::read_text_file(in));
        rows.insert(rows.end(), part.begin(), part.end());
      }
      write_or_print(summary_out, wcbs::summary_csv(wcbs::summarize(rows, baseline)));
      if (!means_out.empty()) write_or_print(means_out, wcbs::means_csv(wcbs::seed_means(rows)));
    } else if (solve->parsed()) {
      const auto map = wcbs::parse_map(wcbs::read_text_file(map_path), wcbs::file_stem(map_path));
      const auto tasks = wcbs::select_agents(wcbs::parse_scen(wcbs::read_text_file(scen_path)), agents, seed);
      const auto method = solve_flags.methods().front();
      const wcbs::Instance instance(map, tasks);
      std::vector<wcbs::Path> paths;
      if (method.kind == wcbs::MethodSpec::Kind::pp) {
        auto pp = wcbs::prioritized_plan(instance, method.cfg.w_h, timeout);
        std::cout << "outcome " << (pp.solved() ? "solved" : "failed at agent " + std::to_string(pp.failed_agent)) << '\n';
        if (pp.solved()) std::cout << "sum_of_costs " << pp.sum_of_costs() << '\n';
        paths = std::move(pp.paths);
      } else {
        auto cfg = method.cfg;
        cfg.timeout_s = timeout;
        auto sol = wcbs::solve(instance, cfg);
        std::cout << "outcome " << wcbs::to_string(sol.outcome) << '\n';
        if (sol.solved())
          std::cout << "sum_of_costs " << sol.sum_of_costs << "\nlb_sum " << sol.lb_sum << '\n';
        std::cout << "ct_generated " << sol.stats.ct_generated << "\nwall_time_s " << sol.stats.wall_time_s << '\n';
        paths = std::move(sol.paths);
      }
      for (std::size_t i = 0; i < paths.size(); ++i) {
        std::cout << "agent " << i << ':';
        for (auto loc : paths[i].cells) {
          const auto c = map.cell(loc);
          std::cout << " (" << c.row << ',' << c.col << ')';
        }
        std::cout << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
