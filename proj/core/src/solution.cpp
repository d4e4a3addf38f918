#include "csched/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csched/errors.hpp"

namespace csched {

void Selection::sort_canonical() { std::sort(chosen.begin(), chosen.end()); }

void FractionalSolution::sort_canonical() {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user_id, a.pref_id) < std::tie(b.user_id, b.pref_id);
  });
}

double FractionalSolution::value_of(const std::string& user_id, const std::string& pref_id) const {
  for (const auto& e : entries) {
    if (e.user_id == user_id && e.pref_id == pref_id) return e.value;
  }
  return 0.0;
}

void Solution::sort_canonical() {
  chosen.sort_canonical();
  std::sort(fractional.begin(), fractional.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user_id, a.pref_id) < std::tie(b.user_id, b.pref_id);
  });
}

namespace {

void add_load(std::vector<ComplexPower>& loads, const DemandPreference& pref, double weight) {
  for (std::size_t i = 0; i < pref.window.size(); ++i) {
    loads[pref.window[i] - 1] += weight * pref.values[i];
  }
}

const DemandPreference& resolve(const Instance& instance, const std::string& user_id,
                                const std::string& pref_id) {
  const User* u = instance.find_user(user_id);
  if (u == nullptr) throw precondition_error("unknown user '" + user_id + "'");
  for (const auto& p : u->preferences) {
    if (p.id == pref_id) return p;
  }
  throw precondition_error("unknown pref '" + pref_id + "' of user '" + user_id + "'");
}

SolveReport finish_report(const Instance& instance, std::vector<ComplexPower> loads,
                          double utility) {
  SolveReport report;
  report.utility = utility;
  report.violation_beta = 1.0;
  for (int t = 0; t < instance.num_slots; ++t) {
    report.violation_beta =
        std::max(report.violation_beta, loads[t].magnitude() / instance.capacities[t]);
  }
  report.per_slot_load = std::move(loads);
  return report;
}

}  // namespace

SolveReport evaluate(const Instance& instance, const Selection& selection) {
  std::vector<ComplexPower> loads(instance.num_slots);
  double utility = 0.0;
  for (const auto& [user_id, pref_id] : selection.chosen) {
    const DemandPreference& p = resolve(instance, user_id, pref_id);
    add_load(loads, p, 1.0);
    utility += p.utility;
  }
  return finish_report(instance, std::move(loads), utility);
}

SolveReport evaluate(const Instance& instance, const Solution& solution) {
  std::vector<ComplexPower> loads(instance.num_slots);
  double utility = 0.0;
  for (const auto& [user_id, pref_id] : solution.chosen.chosen) {
    const DemandPreference& p = resolve(instance, user_id, pref_id);
    add_load(loads, p, 1.0);
    utility += p.utility;
  }
  for (const auto& e : solution.fractional) {
    const DemandPreference& p = resolve(instance, e.user_id, e.pref_id);
    add_load(loads, p, e.value);
    utility += e.value * p.utility;
  }
  return finish_report(instance, std::move(loads), utility);
}

namespace {

bool loads_within(const Instance& instance, const SolveReport& report, double beta) {
  for (int t = 0; t < instance.num_slots; ++t) {
    const double cap = instance.capacities[t];
    if (report.per_slot_load[t].magnitude() > beta * cap + kFeasibilityTol * cap) return false;
  }
  return true;
}

}  // namespace

bool is_feasible(const Instance& instance, const Selection& selection, double beta) {
  if (beta < 1.0) throw precondition_error("is_feasible: beta must be >= 1");
  std::map<std::string, int> per_user;
  for (const auto& [user_id, pref_id] : selection.chosen) {
    if (++per_user[user_id] > 1) return false;
  }
  return loads_within(instance, evaluate(instance, selection), beta);
}

bool is_feasible(const Instance& instance, const Solution& solution, double beta) {
  if (beta < 1.0) throw precondition_error("is_feasible: beta must be >= 1");
  std::map<std::string, double> per_user;
  for (const auto& [user_id, pref_id] : solution.chosen.chosen) per_user[user_id] += 1.0;
  for (const auto& e : solution.fractional) {
    if (e.value < -kFeasibilityTol || e.value > 1.0 + kFeasibilityTol) return false;
    per_user[e.user_id] += e.value;
  }
  for (const auto& [user, total] : per_user) {
    if (total > 1.0 + kFeasibilityTol) return false;
  }
  return loads_within(instance, evaluate(instance, solution), beta);
}

}  // namespace csched
