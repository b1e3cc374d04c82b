#include "wcbs/cbs.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace wcbs {

std::vector<Constraint> CTNode::constraints() const {
  std::vector<Constraint> out;
  for (const CTNode* n = this; n != nullptr; n = n->parent)
    if (n->added) out.push_back(*n->added);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Constraint> CTNode::constraints_for(int agent) const {
  std::vector<Constraint> out;
  for (const CTNode* n = this; n != nullptr; n = n->parent)
    if (n->added && n->added->agent == agent) out.push_back(*n->added);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<const Path*> CTNode::path_pointers() const {
  std::vector<const Path*> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.get());
  return out;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::timeout: return "timeout";
    case Outcome::infeasible: return "infeasible";
  }
  return "?";
}

namespace {

int rank(Cardinality c) { return static_cast<int>(c); }

}  // namespace

const Conflict& choose_conflict(const std::vector<Conflict>& classified, bool prioritize) {
  auto best = classified.begin();
  for (auto it = std::next(best); it != classified.end(); ++it) {
    if (prioritize && rank(it->cardinality) != rank(best->cardinality)) {
      if (rank(it->cardinality) < rank(best->cardinality)) best = it;
      continue;
    }
    if (detection_order(*it, *best)) best = it;
  }
  return *best;
}

Cardinality classify_conflict(const Conflict& conflict, const CTNode& node, const Instance& instance, MddCache& cache) {
  const auto c1 = node.constraints_for(conflict.a1);
  const auto c2 = node.constraints_for(conflict.a2);
  const AgentSide first{node.paths[conflict.a1].get(), node.lbs[conflict.a1], c1};
  const AgentSide second{node.paths[conflict.a2].get(), node.lbs[conflict.a2], c2};
  return classify_conflict(conflict, first, second, instance, cache);
}

std::optional<CTNode> replan_child(const Instance& instance, const CTNode& parent, const Constraint& constraint,
                                   const SolverConfig& cfg, const Deadline* deadline, LowLevelResult* low_level) {
  const int agent = constraint.agent;
  CTNode child;
  child.parent = &parent;
  child.added = constraint;
  child.depth = parent.depth + 1;
  child.paths = parent.paths;
  child.lbs = parent.lbs;

  auto constraints = parent.constraints_for(agent);
  constraints.push_back(constraint);
  auto others = parent.path_pointers();
  others[agent] = nullptr;

  LowLevelOptions options;
  options.deadline = deadline;
  auto result = low_level_search(instance.map(), instance.task(agent), constraints, others, cfg,
                                 instance.heuristic(agent), options);
  if (low_level != nullptr) *low_level = result;
  if (!result.found()) return std::nullopt;

  child.cost = parent.cost - parent.paths[agent]->cost() + result.path.cost();
  child.lbs[agent] = std::max(parent.lbs[agent], result.lb);
  child.lb_sum = 0.0;
  for (double lb : child.lbs) child.lb_sum += lb;
  child.paths[agent] = std::make_shared<const Path>(std::move(result.path));

  child.conflicts.clear();
  for (const auto& c : parent.conflicts)
    if (c.a1 != agent && c.a2 != agent) child.conflicts.push_back(c);
  others[agent] = child.paths[agent].get();
  auto fresh = detect_conflicts_for_agent(agent, others);
  child.conflicts.insert(child.conflicts.end(), fresh.begin(), fresh.end());
  std::sort(child.conflicts.begin(), child.conflicts.end(), detection_order);
  return child;
}

namespace {

class ConstraintTreeSearch {
 public:
  ConstraintTreeSearch(const Instance& instance, const SolverConfig& cfg, const SolveHooks* hooks)
      : instance_(instance), cfg_(cfg), hooks_(hooks), deadline_(cfg.timeout_s) {}

  Solution run() {
    Solution sol;
    sol.outcome = search(sol);
    sol.stats = stats_;
    sol.stats.wall_time_s = deadline_.elapsed();
    return sol;
  }

 private:
  struct ByCost {
    bool operator()(const CTNode* a, const CTNode* b) const {
      if (a->cost != b->cost) return a->cost < b->cost;
      if (a->conflicts.size() != b->conflicts.size()) return a->conflicts.size() < b->conflicts.size();
      return a->id < b->id;
    }
  };
  struct ByLowerBound {
    bool operator()(const CTNode* a, const CTNode* b) const {
      if (a->lb_sum != b->lb_sum) return a->lb_sum < b->lb_sum;
      return a->id < b->id;
    }
  };
  struct ByConflicts {
    bool operator()(const CTNode* a, const CTNode* b) const {
      if (a->conflicts.size() != b->conflicts.size()) return a->conflicts.size() < b->conflicts.size();
      if (a->cost != b->cost) return a->cost < b->cost;
      return a->id < b->id;
    }
  };
  struct ByCostId {
    bool operator()(const CTNode* a, const CTNode* b) const {
      if (a->cost != b->cost) return a->cost < b->cost;
      return a->id < b->id;
    }
  };

  bool optimal() const { return cfg_.high_level == HighLevel::optimal_cbs; }

  Outcome search(Solution& sol) {
    const int n = instance_.agent_count();
    std::vector<Location> goals;
    for (const auto& t : instance_.tasks()) goals.push_back(instance_.map().location(t.goal));
    instance_.heuristics().prefetch(goals);

    // Root: agents in id order, each avoiding the ones already planned.
    CTNode root;
    root.paths.resize(n);
    root.lbs.assign(n, 0.0);
    std::vector<const Path*> planned(n, nullptr);
    for (int i = 0; i < n; ++i) {
      LowLevelOptions options;
      options.deadline = &deadline_;
      auto result = low_level_search(instance_.map(), instance_.task(i), {}, planned, cfg_, instance_.heuristic(i), options);
      note_low_level(instance_.task(i), {}, planned, result);
      if (result.status == SearchStatus::timeout) return Outcome::timeout;
      if (!result.found()) return Outcome::infeasible;
      root.lbs[i] = result.lb;
      root.cost += result.path.cost();
      root.lb_sum += result.lb;
      root.paths[i] = std::make_shared<const Path>(std::move(result.path));
      planned[i] = root.paths[i].get();
    }
    root.conflicts = detect_conflicts(std::span<const Path* const>(planned));
    push(std::move(root));

    while (true) {
      if (deadline_.expired()) return Outcome::timeout;
      CTNode* node = pop();
      if (node == nullptr) return Outcome::infeasible;

      if (node->conflicts.empty()) {
        sol.sum_of_costs = node->cost;
        sol.lb_sum = optimal() ? node->cost : std::max(certified_lb_, 0.0);
        for (const auto& p : node->paths) sol.paths.push_back(*p);
        return Outcome::solved;
      }

      ++stats_.ct_expanded;
      const Conflict conflict = select_conflict(*node);
      for (const auto& constraint : split_conflict(conflict)) {
        LowLevelResult low;
        std::vector<Constraint> agent_constraints;
        if (hooks_ != nullptr && hooks_->on_low_level) {
          agent_constraints = node->constraints_for(constraint.agent);
          agent_constraints.push_back(constraint);
        }
        auto child = replan_child(instance_, *node, constraint, cfg_, &deadline_, &low);
        if (hooks_ != nullptr && hooks_->on_low_level) {
          auto others = node->path_pointers();
          others[constraint.agent] = nullptr;
          hooks_->on_low_level(instance_.task(constraint.agent), agent_constraints, others, low);
        }
        ++stats_.low_level_calls;
        stats_.low_level_expansions += low.expansions;
        if (low.status == SearchStatus::timeout) return Outcome::timeout;
        if (child) push(std::move(*child));
      }
    }
  }

  void note_low_level(const AgentTask& task, std::span<const Constraint> constraints, std::span<const Path* const> others,
                      const LowLevelResult& result) {
    ++stats_.low_level_calls;
    stats_.low_level_expansions += result.expansions;
    if (hooks_ != nullptr && hooks_->on_low_level) hooks_->on_low_level(task, constraints, others, result);
  }

  Conflict select_conflict(CTNode& node) {
    if (cfg_.prioritize_conflicts)
      for (auto& c : node.conflicts) c.cardinality = classify_conflict(c, node, instance_, mdds_);
    const Conflict& chosen = choose_conflict(node.conflicts, cfg_.prioritize_conflicts);
    if (cfg_.prioritize_conflicts) {
      switch (chosen.cardinality) {
        case Cardinality::cardinal: ++stats_.cardinal; break;
        case Cardinality::semi_cardinal: ++stats_.semi_cardinal; break;
        case Cardinality::non_cardinal: ++stats_.non_cardinal; break;
        case Cardinality::unknown: ++stats_.unknown; break;
      }
    }
    return chosen;
  }

  void push(CTNode&& node) {
    node.id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    CTNode* ptr = &nodes_.back();
    ++stats_.ct_generated;
    if (hooks_ != nullptr && hooks_->on_node_generated) hooks_->on_node_generated(*ptr);
    if (optimal()) {
      by_cost_.insert(ptr);
      return;
    }
    open_.insert(ptr);
    // Admit against the minimum seen at the last pop: a sibling still to be
    // pushed may lower the current OPEN minimum, but never below that one.
    if (ptr->cost <= cfg_.w_so * certified_lb_)
      focal_.insert(ptr);
    else
      waiting_.insert(ptr);
  }

  CTNode* pop() {
    if (optimal()) {
      if (by_cost_.empty()) return nullptr;
      CTNode* node = *by_cost_.begin();
      by_cost_.erase(by_cost_.begin());
      return node;
    }
    if (open_.empty()) return nullptr;
    const double bound = cfg_.w_so * (*open_.begin())->lb_sum;
    while (!waiting_.empty() && (*waiting_.begin())->cost <= bound) {
      focal_.insert(*waiting_.begin());
      waiting_.erase(waiting_.begin());
    }
    certified_lb_ = (*open_.begin())->lb_sum;
    if (focal_.empty()) {
      // Only reachable through floating-point rounding of the bound.
      CTNode* node = *open_.begin();
      open_.erase(open_.begin());
      waiting_.erase(node);
      return node;
    }
    CTNode* node = *focal_.begin();
    focal_.erase(focal_.begin());
    open_.erase(node);
    return node;
  }

  const Instance& instance_;
  const SolverConfig& cfg_;
  const SolveHooks* hooks_;
  Deadline deadline_;
  SolveStats stats_;
  MddCache mdds_;
  std::deque<CTNode> nodes_;
  std::set<CTNode*, ByCost> by_cost_;
  std::set<CTNode*, ByLowerBound> open_;
  std::set<CTNode*, ByConflicts> focal_;
  std::set<CTNode*, ByCostId> waiting_;
  double certified_lb_ = 0.0;
};

}  // namespace

Solution solve(const Instance& instance, const SolverConfig& cfg, const SolveHooks* hooks) {
  cfg.validate();
  ConstraintTreeSearch search(instance, cfg, hooks);
  return search.run();
}

Solution solve(const GridMap& map, const std::vector<AgentTask>& tasks, const SolverConfig& cfg, const SolveHooks* hooks) {
  const Instance instance(map, tasks);
  return solve(instance, cfg, hooks);
}

}  // namespace wcbs
