#pragma once

#include <string>

namespace wcbs {

enum class Variant { vanilla, weighted_open, weighted_focal };
enum class HighLevel { optimal_cbs, focal_ecbs };

// Stand-in for an unbounded suboptimality factor.
inline constexpr double kInfiniteSuboptimality = 10000.0;

struct SolverConfig {
  double w_so = 1.0;
  Variant variant = Variant::vanilla;
  double w_h = 1.0;
  double r = 0.0;            // weighted-focal only: w_c = r * w_h
  bool improved_lb = false;  // weighted-open only
  int horizon = -1;          // < 0: derived per search from the map and constraints
  double timeout_s = 10.0;
  HighLevel high_level = HighLevel::focal_ecbs;
  bool prioritize_conflicts = false;

  double w_c() const { return r * w_h; }

  // Throws std::invalid_argument on an inconsistent parameter set.
  void validate() const;

  static SolverConfig optimal();
  static SolverConfig vanilla_focal(double w_so);
  static SolverConfig weighted_open(double w_so, double w_h, bool improved_lb = false);
  static SolverConfig weighted_focal(double w_so, double w_h, double r);
};

std::string to_string(Variant v);
std::string to_string(HighLevel h);

double f_open(double g, double h, const SolverConfig& cfg);
double f_focal(double g, double h, int conflicts, const SolverConfig& cfg);
// w_f: FOCAL admits OPEN nodes with F_open <= w_f * F_best.
double focal_bound(const SolverConfig& cfg);
// Lower bound on the optimal single-agent cost from the minimum OPEN key and
// the minimum g over OPEN. The caller keeps the running maximum.
double lower_bound(double f_best, double g_min, const SolverConfig& cfg);
double naive_lower_bound(double f_best, const SolverConfig& cfg);
double improved_lower_bound(double f_best, double g_min, const SolverConfig& cfg);

}  // namespace wcbs
