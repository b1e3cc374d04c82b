#include "wcbs/config.hpp"

#include <stdexcept>

namespace wcbs {

void SolverConfig::validate() const {
  if (!(w_so >= 1.0)) throw std::invalid_argument("w_so must be >= 1");
  if (!(w_h >= 1.0)) throw std::invalid_argument("w_h must be >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("r must be >= 0");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be > 0");
  if (variant == Variant::weighted_open && w_h > w_so)
    throw std::invalid_argument("weighted-open requires w_h <= w_so (focal bound would drop below 1)");
  if (high_level == HighLevel::optimal_cbs && (w_so != 1.0 || variant != Variant::vanilla))
    throw std::invalid_argument("optimal CBS requires w_so = 1 and the vanilla low level");
}

SolverConfig SolverConfig::optimal() {
  SolverConfig cfg;
  cfg.high_level = HighLevel::optimal_cbs;
  return cfg;
}

SolverConfig SolverConfig::vanilla_focal(double w_so) {
  SolverConfig cfg;
  cfg.w_so = w_so;
  return cfg;
}

SolverConfig SolverConfig::weighted_open(double w_so, double w_h, bool improved_lb) {
  SolverConfig cfg;
  cfg.w_so = w_so;
  cfg.variant = Variant::weighted_open;
  cfg.w_h = w_h;
  cfg.improved_lb = improved_lb;
  return cfg;
}

SolverConfig SolverConfig::weighted_focal(double w_so, double w_h, double r) {
  SolverConfig cfg;
  cfg.w_so = w_so;
  cfg.variant = Variant::weighted_focal;
  cfg.w_h = w_h;
  cfg.r = r;
  return cfg;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::vanilla: return "vanilla";
    case Variant::weighted_open: return "weighted-open";
    case Variant::weighted_focal: return "weighted-focal";
  }
  return "?";
}

std::string to_string(HighLevel h) { return h == HighLevel::optimal_cbs ? "optimal" : "focal"; }

double f_open(double g, double h, const SolverConfig& cfg) {
  return cfg.variant == Variant::weighted_open ? g + cfg.w_h * h : g + h;
}

double f_focal(double g, double h, int conflicts, const SolverConfig& cfg) {
  if (cfg.variant == Variant::weighted_focal) return g + cfg.w_h * (h + cfg.r * conflicts);
  return static_cast<double>(conflicts);
}

double focal_bound(const SolverConfig& cfg) {
  if (cfg.variant == Variant::weighted_open) {
    if (cfg.w_h > cfg.w_so) throw std::invalid_argument("weighted-open requires w_h <= w_so");
    return cfg.w_so / cfg.w_h;
  }
  return cfg.w_so;
}

double naive_lower_bound(double f_best, const SolverConfig& cfg) {
  return cfg.variant == Variant::weighted_open ? f_best / cfg.w_h : f_best;
}

double improved_lower_bound(double f_best, double g_min, const SolverConfig& cfg) {
  if (cfg.variant != Variant::weighted_open) return f_best;
  return (f_best + (cfg.w_h - 1.0) * g_min) / cfg.w_h;
}

double lower_bound(double f_best, double g_min, const SolverConfig& cfg) {
  return cfg.improved_lb ? improved_lower_bound(f_best, g_min, cfg) : naive_lower_bound(f_best, cfg);
}

}  // namespace wcbs
