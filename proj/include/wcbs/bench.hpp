#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wcbs/config.hpp"
#include "wcbs/grid.hpp"

namespace wcbs {

// One solver setting in a sweep.
struct MethodSpec {
  enum class Kind { cbs, pp };

  Kind kind = Kind::cbs;
  std::string variant;  // vanilla, wo, wf, pp, cbspp
  SolverConfig cfg;
  std::string label;
};

// Builds a method from CLI-style names. Throws std::invalid_argument.
MethodSpec make_method(const std::string& variant, double w_so, double w_h, double r, bool improved_lb,
                       const std::string& high_level, bool prioritize_conflicts);

struct RunSpec {
  std::string map_path;
  std::string scen_path;
  std::vector<int> agent_counts;
  std::vector<std::uint64_t> seeds;
  std::vector<MethodSpec> methods;
  double timeout_s = 10.0;
  std::string out_path;
  int workers = 1;

  void validate(std::size_t scenario_size) const;
};

// "50,100,150" or "50:50:150" (start:step:max).
std::vector<int> parse_agent_counts(const std::string& text);
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct ResultRow {
  std::string map;
  std::string method;
  std::string variant;
  double w_so = 1.0;
  double w_h = 1.0;
  double r = 0.0;
  bool improved_lb = false;
  std::string high_level;
  int agents = 0;
  std::uint64_t seed = 0;
  std::string outcome;  // solved, timeout, infeasible, failed
  double wall_time_s = 0.0;
  std::int64_t sum_of_costs = -1;
  std::optional<double> lb_sum;
  std::int64_t ct_generated = 0;
  std::int64_t ct_expanded = 0;
  std::int64_t low_level_expansions = 0;
  std::int64_t cardinal = 0;
  std::int64_t semi_cardinal = 0;
  std::int64_t non_cardinal = 0;
  std::int64_t unknown = 0;

  bool solved() const { return outcome == "solved"; }
};

const std::vector<std::string>& result_columns();
std::string csv_header();
std::string to_csv(const ResultRow& row);
// Parses a results CSV written by to_csv (header required).
std::vector<ResultRow> parse_results_csv(const std::string& text);

// Solves one (method, agents, seed) instance.
using InstanceRunner = std::function<ResultRow(const MethodSpec&, const GridMap&, const std::vector<AgentTask>&,
                                               std::uint64_t seed, double timeout_s)>;
ResultRow run_instance(const MethodSpec& method, const GridMap& map, const std::vector<AgentTask>& tasks,
                       std::uint64_t seed, double timeout_s);

// Sweeps agent counts in ascending order. For each method, counts above the
// first count where no seed solved are skipped. Runs within one count go to
// up to `workers` OpenMP threads; rows are written to `csv` (if given) in
// deterministic (method, seed) order as soon as their prefix is complete.
std::vector<ResultRow> run_benchmark(const RunSpec& spec, const GridMap& map, const std::vector<AgentTask>& scenario,
                                     std::ostream* csv, const InstanceRunner& runner = run_instance);
// Loads files named in `spec`, writes spec.out_path if set.
std::vector<ResultRow> run_benchmark(const RunSpec& spec);

// T_baseline / T_method when the baseline solved the instance, nullopt
// (censored) otherwise. Throws std::invalid_argument on a nonpositive time.
std::optional<double> speedup(double t_baseline, double t_method, bool baseline_solved);

struct SummaryRow {
  std::string method;
  std::optional<double> max_speedup;
  std::optional<double> median_speedup;
  std::optional<double> pct_faster;  // strict wall-time wins over the baseline
  int solved = 0;
  int compared = 0;  // uncensored instances
};

// Speedup table per method against `baseline`, over instances keyed by
// (map, agents, seed). Throws std::invalid_argument if the baseline is absent.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::string& baseline);
std::string summary_csv(const std::vector<SummaryRow>& summary);

// Per (map, method, agents) means across seeds.
struct MeanRow {
  std::string map;
  std::string method;
  int agents = 0;
  int runs = 0;
  int solved = 0;
  double mean_wall_time_s = 0.0;
  double mean_ct_generated = 0.0;
  double mean_cardinal = 0.0;
};
std::vector<MeanRow> seed_means(const std::vector<ResultRow>& rows);
std::string means_csv(const std::vector<MeanRow>& means);

}  // namespace wcbs
