#include "wcbs/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "wcbs/cbs.hpp"
#include "wcbs/prioritized.hpp"

namespace wcbs {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + s + "'");
  }
}

std::int64_t to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + s + "'");
  }
}

}  // namespace

MethodSpec make_method(const std::string& variant, double w_so, double w_h, double r, bool improved_lb,
                       const std::string& high_level, bool prioritize_conflicts) {
  MethodSpec m;
  m.variant = variant;
  if (variant == "vanilla") {
    m.cfg = SolverConfig::vanilla_focal(w_so);
    m.label = "vanilla";
  } else if (variant == "wo") {
    m.cfg = SolverConfig::weighted_open(w_so, w_h, improved_lb);
    m.label = "wo-" + num(w_h) + (improved_lb ? "+" : "");
  } else if (variant == "wf") {
    m.cfg = SolverConfig::weighted_focal(w_so, w_h, r);
    m.label = "wf-" + num(w_h) + "-" + num(r);
  } else if (variant == "cbspp") {
    m.cfg = cbspp_config(w_h);
    m.label = "cbspp-" + num(w_h);
  } else if (variant == "pp") {
    m.kind = MethodSpec::Kind::pp;
    m.cfg = cbspp_config(w_h);
    m.label = "pp-" + num(w_h);
  } else {
    throw std::invalid_argument("unknown variant '" + variant + "' (expected vanilla, wo, wf, pp, cbspp)");
  }

  if (high_level == "optimal") {
    if (m.kind == MethodSpec::Kind::pp || variant == "cbspp")
      throw std::invalid_argument("--high-level optimal applies to CBS variants only");
    m.cfg.high_level = HighLevel::optimal_cbs;
    m.label = "optimal";
  } else if (high_level != "focal") {
    throw std::invalid_argument("unknown high level '" + high_level + "' (expected optimal or focal)");
  }
  m.cfg.prioritize_conflicts = prioritize_conflicts;
  if (prioritize_conflicts && m.kind == MethodSpec::Kind::cbs) m.label += "-pc";
  if (m.kind == MethodSpec::Kind::cbs && variant != "cbspp" && m.cfg.high_level == HighLevel::focal_ecbs)
    m.label += "@" + num(w_so);
  m.cfg.validate();
  return m;
}

void RunSpec::validate(std::size_t scenario_size) const {
  if (agent_counts.empty()) throw std::invalid_argument("no agent counts given");
  for (int n : agent_counts) {
    if (n <= 0) throw std::invalid_argument("agent counts must be positive");
    if (static_cast<std::size_t>(n) > scenario_size)
      throw std::invalid_argument("agent count " + std::to_string(n) + " exceeds scenario size " + std::to_string(scenario_size));
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  if (methods.empty()) throw std::invalid_argument("no methods given");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

std::vector<int> parse_agent_counts(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("agent range must be START:STEP:MAX");
    const auto start = to_int(parts[0], "agent start");
    const auto step = to_int(parts[1], "agent step");
    const auto max = to_int(parts[2], "agent max");
    if (start <= 0 || step <= 0 || max < start) throw std::invalid_argument("agent range must satisfy 0 < START <= MAX, STEP > 0");
    for (auto n = start; n <= max; n += step) out.push_back(static_cast<int>(n));
  } else {
    for (const auto& p : split(text, ',')) out.push_back(static_cast<int>(to_int(p, "agent count")));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& p : split(text, ',')) {
    const auto v = to_int(p, "seed");
    if (v < 0) throw std::invalid_argument("seeds must be nonnegative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "map",          "method",       "variant",    "w_so",          "w_h",
      "r",            "improved_lb",  "high_level", "agents",        "seed",
      "outcome",      "wall_time_s",  "sum_of_costs", "lb_sum",      "ct_generated",
      "ct_expanded",  "low_level_expansions", "cardinal", "semi_cardinal", "non_cardinal",
      "unknown"};
  return columns;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : result_columns()) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream o;
  o << r.map << ',' << r.method << ',' << r.variant << ',' << num(r.w_so) << ',' << num(r.w_h) << ',' << num(r.r) << ','
    << (r.improved_lb ? 1 : 0) << ',' << r.high_level << ',' << r.agents << ',' << r.seed << ',' << r.outcome << ','
    << fixed(r.wall_time_s) << ',' << (r.sum_of_costs >= 0 ? std::to_string(r.sum_of_costs) : "") << ','
    << (r.lb_sum ? fixed(*r.lb_sum) : "") << ',' << r.ct_generated << ',' << r.ct_expanded << ','
    << r.low_level_expansions << ',' << r.cardinal << ',' << r.semi_cardinal << ',' << r.non_cardinal << ','
    << r.unknown;
  return o.str();
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw std::invalid_argument("results header does not match the expected schema");
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != result_columns().size())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(result_columns().size()) + " columns");
    ResultRow r;
    r.map = f[0];
    r.method = f[1];
    r.variant = f[2];
    r.w_so = to_double(f[3], "w_so");
    r.w_h = to_double(f[4], "w_h");
    r.r = to_double(f[5], "r");
    r.improved_lb = f[6] == "1";
    r.high_level = f[7];
    r.agents = static_cast<int>(to_int(f[8], "agents"));
    r.seed = static_cast<std::uint64_t>(to_int(f[9], "seed"));
    r.outcome = f[10];
    r.wall_time_s = to_double(f[11], "wall_time_s");
    r.sum_of_costs = f[12].empty() ? -1 : to_int(f[12], "sum_of_costs");
    if (!f[13].empty()) r.lb_sum = to_double(f[13], "lb_sum");
    r.ct_generated = to_int(f[14], "ct_generated");
    r.ct_expanded = to_int(f[15], "ct_expanded");
    r.low_level_expansions = to_int(f[16], "low_level_expansions");
    r.cardinal = to_int(f[17], "cardinal");
    r.semi_cardinal = to_int(f[18], "semi_cardinal");
    r.non_cardinal = to_int(f[19], "non_cardinal");
    r.unknown = to_int(f[20], "unknown");
    rows.push_back(std::move(r));
  }
  return rows;
}

ResultRow run_instance(const MethodSpec& method, const GridMap& map, const std::vector<AgentTask>& tasks,
                       std::uint64_t seed, double timeout_s) {
  ResultRow row;
  row.map = map.name();
  row.method = method.label;
  row.variant = method.variant;
  row.w_so = method.cfg.w_so;
  row.w_h = method.cfg.w_h;
  row.r = method.cfg.r;
  row.improved_lb = method.cfg.improved_lb;
  row.high_level = method.kind == MethodSpec::Kind::pp ? "none" : to_string(method.cfg.high_level);
  row.agents = static_cast<int>(tasks.size());
  row.seed = seed;

  const Instance instance(map, tasks);
  if (method.kind == MethodSpec::Kind::pp) {
    const auto pp = prioritized_plan(instance, method.cfg.w_h, timeout_s);
    row.outcome = pp.solved() ? "solved" : pp.outcome == PPResult::Outcome::timeout ? "timeout" : "failed";
    row.wall_time_s = pp.wall_time_s;
    if (pp.solved()) row.sum_of_costs = pp.sum_of_costs();
    row.low_level_expansions = pp.low_level_expansions;
  } else {
    SolverConfig cfg = method.cfg;
    cfg.timeout_s = timeout_s;
    const auto sol = solve(instance, cfg);
    row.outcome = to_string(sol.outcome);
    row.wall_time_s = sol.stats.wall_time_s;
    if (sol.solved()) {
      row.sum_of_costs = sol.sum_of_costs;
      row.lb_sum = sol.lb_sum;
    }
    row.ct_generated = sol.stats.ct_generated;
    row.ct_expanded = sol.stats.ct_expanded;
    row.low_level_expansions = sol.stats.low_level_expansions;
    row.cardinal = sol.stats.cardinal;
    row.semi_cardinal = sol.stats.semi_cardinal;
    row.non_cardinal = sol.stats.non_cardinal;
    row.unknown = sol.stats.unknown;
  }
  row.wall_time_s = std::max(row.wall_time_s, 1e-6);
  return row;
}

std::vector<ResultRow> run_benchmark(const RunSpec& spec, const GridMap& map, const std::vector<AgentTask>& scenario,
                                     std::ostream* csv, const InstanceRunner& runner) {
  spec.validate(scenario.size());
  if (csv != nullptr) *csv << csv_header() << '\n' << std::flush;

  std::vector<ResultRow> rows;
  std::vector<bool> active(spec.methods.size(), true);
  for (int agents : spec.agent_counts) {
    struct Job {
      std::size_t method;
      std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < spec.methods.size(); ++m)
      if (active[m])
        for (auto seed : spec.seeds) jobs.push_back({m, seed});
    if (jobs.empty()) break;

    std::vector<std::optional<ResultRow>> results(jobs.size());
    std::size_t committed = 0;
    const long count = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(spec.workers)
    for (long k = 0; k < count; ++k) {
      const auto& job = jobs[k];
      const auto tasks = select_agents(scenario, static_cast<std::size_t>(agents), job.seed);
      ResultRow row = runner(spec.methods[job.method], map, tasks, job.seed, spec.timeout_s);
#pragma omp critical(wcbs_result_writer)
      {
        results[k] = std::move(row);
        while (committed < results.size() && results[committed]) {
          if (csv != nullptr) *csv << to_csv(*results[committed]) << '\n' << std::flush;
          ++committed;
        }
      }
    }

    std::vector<bool> any_solved(spec.methods.size(), false);
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (results[k]->solved()) any_solved[jobs[k].method] = true;
      rows.push_back(std::move(*results[k]));
    }
    for (std::size_t m = 0; m < spec.methods.size(); ++m)
      if (active[m] && !any_solved[m]) active[m] = false;
  }
  return rows;
}

std::vector<ResultRow> run_benchmark(const RunSpec& spec) {
  const std::string map_text = read_text_file(spec.map_path);
  const std::string scen_text = read_text_file(spec.scen_path);
  GridMap map;
  std::vector<AgentTask> scenario;
  try {
    map = parse_map(map_text, file_stem(spec.map_path));
  } catch (const std::exception& e) {
    throw std::runtime_error(spec.map_path + ": " + e.what());
  }
  try {
    scenario = parse_scen(scen_text);
    validate_tasks(map, scenario);
  } catch (const std::exception& e) {
    throw std::runtime_error(spec.scen_path + ": " + e.what());
  }

  if (spec.out_path.empty() || spec.out_path == "-") return run_benchmark(spec, map, scenario, &std::cout);
  std::ofstream out(spec.out_path);
  if (!out) throw std::runtime_error("cannot write " + spec.out_path);
  return run_benchmark(spec, map, scenario, &out);
}

std::optional<double> speedup(double t_baseline, double t_method, bool baseline_solved) {
  if (!(t_baseline > 0.0) || !(t_method > 0.0)) throw std::invalid_argument("speedup requires positive times");
  if (!baseline_solved) return std::nullopt;
  return t_baseline / t_method;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::string& baseline) {
  using Key = std::tuple<std::string, int, std::uint64_t>;
  std::map<Key, const ResultRow*> base;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (r.method == baseline) base[{r.map, r.agents, r.seed}] = &r;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  if (base.empty()) throw std::invalid_argument("baseline '" + baseline + "' not found in results");

  std::vector<SummaryRow> out;
  for (const auto& m : methods) {
    SummaryRow s;
    s.method = m;
    std::vector<double> ups;
    int faster = 0;
    for (const auto& r : rows) {
      if (r.method != m) continue;
      if (r.solved()) ++s.solved;
      auto it = base.find({r.map, r.agents, r.seed});
      if (it == base.end()) continue;
      const auto up = speedup(it->second->wall_time_s, r.wall_time_s, it->second->solved());
      if (!up) continue;
      ups.push_back(*up);
      if (r.wall_time_s < it->second->wall_time_s) ++faster;
    }
    s.compared = static_cast<int>(ups.size());
    if (!ups.empty()) {
      s.max_speedup = *std::max_element(ups.begin(), ups.end());
      s.median_speedup = median(ups);
      s.pct_faster = 100.0 * faster / static_cast<double>(ups.size());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
  std::ostringstream o;
  o << "method,max_speedup,median_speedup,pct_faster,solved,compared\n";
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  for (const auto& s : summary)
    o << s.method << ',' << opt(s.max_speedup) << ',' << opt(s.median_speedup) << ',' << opt(s.pct_faster) << ','
      << s.solved << ',' << s.compared << '\n';
  return o.str();
}

std::vector<MeanRow> seed_means(const std::vector<ResultRow>& rows) {
  std::vector<MeanRow> out;
  std::map<std::tuple<std::string, std::string, int>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.map, r.method, r.agents}, out.size());
    if (fresh) out.push_back(MeanRow{r.map, r.method, r.agents});
    MeanRow& m = out[it->second];
    ++m.runs;
    m.solved += r.solved();
    m.mean_wall_time_s += r.wall_time_s;
    m.mean_ct_generated += static_cast<double>(r.ct_generated);
    m.mean_cardinal += static_cast<double>(r.cardinal);
  }
  for (auto& m : out) {
    m.mean_wall_time_s /= m.runs;
    m.mean_ct_generated /= m.runs;
    m.mean_cardinal /= m.runs;
  }
  return out;
}

std::string means_csv(const std::vector<MeanRow>& means) {
  std::ostringstream o;
  o << "map,method,agents,runs,solved,mean_wall_time_s,mean_ct_generated,mean_cardinal\n";
  for (const auto& m : means)
    o << m.map << ',' << m.method << ',' << m.agents << ',' << m.runs << ',' << m.solved << ',' << fixed(m.mean_wall_time_s)
      << ',' << num(m.mean_ct_generated) << ',' << num(m.mean_cardinal) << '\n';
  return o.str();
}

}  // namespace wcbs
