#include "csched/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csched/errors.hpp"

namespace csched::elastic {

double compute_lb(const Instance& instance) {
  if (instance.total_preferences() == 0) {
    throw precondition_error("compute_lb: instance has no preferences");
  }
  double lb = 0.0;
  for (const auto& u : instance.users) {
    for (const auto& p : u.preferences) {
      if (!p.elastic()) {
        lb = std::max(lb, p.utility);
        continue;
      }
      double scaled = p.utility;
      for (std::size_t i = 0; i < p.window.size(); ++i) {
        const double mag = p.values[i].magnitude();
        if (mag == 0.0) continue;  // no constraint from a zero-demand slot
        scaled = std::min(scaled, p.utility * instance.capacities[p.window[i] - 1] / mag);
      }
      lb = std::max(lb, scaled);
    }
  }
  return lb;
}

const ElasticLevel* Discretized::find_level(const std::string& user_id,
                                            const std::string& level_pref_id) const {
  for (const auto& l : levels) {
    if (l.user_id == user_id && l.level_pref_id == level_pref_id) return &l;
  }
  return nullptr;
}

Discretized discretize(const Instance& instance, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw precondition_error("discretize: epsilon must lie in (0, 1)");
  }
  Discretized out;
  out.instance.num_slots = instance.num_slots;
  out.instance.capacities = instance.capacities;

  bool any_elastic = false;
  for (const auto& u : instance.users) {
    for (const auto& p : u.preferences) any_elastic = any_elastic || p.elastic();
  }
  if (!any_elastic) {
    out.instance = instance;
    return out;
  }

  const double lb = compute_lb(instance);
  const double n = static_cast<double>(instance.users.size());

  for (const auto& u : instance.users) {
    User nu;
    nu.id = u.id;
    for (const auto& p : u.preferences) {
      if (!p.elastic()) {
        nu.preferences.push_back(p);
        continue;
      }
      const double ratio = n * p.utility / (epsilon * lb);
      const int level_count =
          static_cast<int>(std::ceil(std::log(ratio) / std::log(1.0 + epsilon) - 1e-12));
      for (int i = 1; i <= level_count; ++i) {
        const double raw = epsilon * lb * std::pow(1.0 + epsilon, i) / (n * p.utility);
        const double fraction = std::min(raw, 1.0);
        DemandPreference level_pref;
        level_pref.id = p.id + "@" + std::to_string(i);
        level_pref.window = p.window;
        for (const auto& v : p.values) level_pref.values.push_back(fraction * v);
        level_pref.utility = fraction * p.utility;
        level_pref.elasticity = Elasticity::Inelastic;
        nu.preferences.push_back(std::move(level_pref));
        out.levels.push_back({u.id, p.id, p.id + "@" + std::to_string(i), i, fraction});
      }
    }
    if (!nu.preferences.empty()) out.instance.users.push_back(std::move(nu));
  }
  return out;
}

Solution map_back(const Selection& level_selection, const Discretized& discretized) {
  Solution out;
  for (const auto& [user_id, pref_id] : level_selection.chosen) {
    const ElasticLevel* level = discretized.find_level(user_id, pref_id);
    if (level == nullptr) {
      out.chosen.chosen.emplace_back(user_id, pref_id);
      continue;
    }
    if (level->fraction > 1.0) {
      throw std::logic_error("map_back: level fraction above 1");
    }
    out.fractional.push_back({user_id, level->orig_pref_id, level->fraction});
  }
  out.sort_canonical();
  return out;
}

SolveResult solve_mixed(const Instance& instance, double epsilon, const InnerSolver& inner) {
  const Discretized discretized = discretize(instance, epsilon);
  SolveResult inner_result = inner(discretized.instance);
  if (!inner_result.solution.fractional.empty()) {
    throw precondition_error("solve_mixed: inner solver returned fractional values on a fully "
                             "inelastic instance");
  }
  SolveResult result;
  result.solution = map_back(inner_result.solution.chosen, discretized);
  result.report = evaluate(instance, result.solution);
  result.report.solver_name = "mixed+" + inner_result.report.solver_name;
  return result;
}

}  // namespace csched::elastic
