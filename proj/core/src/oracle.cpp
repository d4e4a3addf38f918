#include "csched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csched/errors.hpp"

namespace csched::oracle {

namespace {

void check_budget(double assignment_count, const OracleBudget& budget, const char* what) {
  if (assignment_count > static_cast<double>(budget.max_assignments)) {
    throw resource_error(std::string(what) + ": instance too large for oracle, " +
                         std::to_string(assignment_count) + " assignments exceed the budget of " +
                         std::to_string(budget.max_assignments));
  }
}

// Users and preferences ordered by id so the lexicographic tie-break is a
// plain comparison of chosen-pair lists built in DFS order.
struct OrderedView {
  struct Pref {
    const std::string* id;
    const DemandPreference* pref;
  };
  struct UserRef {
    const std::string* id;
    std::vector<Pref> prefs;
    double max_utility = 0.0;
  };
  std::vector<UserRef> users;
  bool first_quadrant = true;

  explicit OrderedView(const Instance& instance) {
    for (const auto& u : instance.users) {
      UserRef ref;
      ref.id = &u.id;
      for (const auto& p : u.preferences) {
        ref.prefs.push_back({&p.id, &p});
        ref.max_utility = std::max(ref.max_utility, p.utility);
        for (const auto& v : p.values) first_quadrant = first_quadrant && v.re >= 0.0;
      }
      std::sort(ref.prefs.begin(), ref.prefs.end(),
                [](const Pref& a, const Pref& b) { return *a.id < *b.id; });
      users.push_back(std::move(ref));
    }
    std::sort(users.begin(), users.end(),
              [](const UserRef& a, const UserRef& b) { return *a.id < *b.id; });
  }
};

struct ExactSearch {
  const Instance& instance;
  const OrderedView& view;
  std::vector<ComplexPower> loads;
  std::vector<double> remaining_utility;  // suffix sums of per-user max utility
  std::vector<std::pair<std::string, std::string>> current;
  double current_utility = 0.0;

  bool have_best = false;
  double best_utility = 0.0;
  std::vector<std::pair<std::string, std::string>> best;

  explicit ExactSearch(const Instance& ins, const OrderedView& v)
      : instance(ins), view(v), loads(ins.num_slots) {
    remaining_utility.assign(view.users.size() + 1, 0.0);
    for (std::size_t k = view.users.size(); k-- > 0;) {
      remaining_utility[k] = remaining_utility[k + 1] + view.users[k].max_utility;
    }
  }

  bool feasible_now() const {
    for (int t = 0; t < instance.num_slots; ++t) {
      const double cap = instance.capacities[t];
      if (loads[t].magnitude() > cap + kFeasibilityTol * cap) return false;
    }
    return true;
  }

  void offer() {
    if (!feasible_now()) return;
    if (!have_best || current_utility > best_utility ||
        (current_utility == best_utility && current < best)) {
      have_best = true;
      best_utility = current_utility;
      best = current;
    }
  }

  void run(std::size_t k) {
    if (k == view.users.size()) {
      offer();
      return;
    }
    if (current_utility + remaining_utility[k] < best_utility) return;
    // With all demands in the first quadrant the load only grows, so an
    // already infeasible prefix cannot recover.
    if (view.first_quadrant && !feasible_now()) return;

    run(k + 1);  // skip this user
    for (const auto& pref : view.users[k].prefs) {
      const DemandPreference& p = *pref.pref;
      for (std::size_t i = 0; i < p.window.size(); ++i) loads[p.window[i] - 1] += p.values[i];
      current.emplace_back(*view.users[k].id, *pref.id);
      current_utility += p.utility;
      run(k + 1);
      current_utility -= p.utility;
      current.pop_back();
      for (std::size_t i = 0; i < p.window.size(); ++i) {
        loads[p.window[i] - 1] += {-p.values[i].re, -p.values[i].im};
      }
    }
  }
};

}  // namespace

ExactResult exact_solve(const Instance& instance, const OracleBudget& budget) {
  double count = 1.0;
  for (const auto& u : instance.users) count *= static_cast<double>(u.preferences.size() + 1);
  check_budget(count, budget, "exact_solve");

  const OrderedView view(instance);
  ExactSearch search(instance, view);
  search.run(0);

  ExactResult out;
  out.selection.chosen = search.best;  // DFS emits in sorted user order
  out.selection.sort_canonical();
  out.utility = search.best_utility;
  return out;
}

namespace {

struct FitSearch {
  const std::vector<dkp::GridUser>& users;
  const std::vector<long long>& c1;
  const std::vector<long long>& c2;
  std::vector<long long> sum1, sum2;
  std::vector<std::pair<std::string, std::string>> current;
  double current_utility = 0.0;

  bool have_best = false;
  double best_utility = 0.0;
  std::vector<std::pair<std::string, std::string>> best;

  FitSearch(const std::vector<dkp::GridUser>& u, const std::vector<long long>& a,
            const std::vector<long long>& b)
      : users(u), c1(a), c2(b), sum1(a.size(), 0), sum2(b.size(), 0) {}

  void run(std::size_t k) {
    for (std::size_t t = 0; t < c1.size(); ++t) {
      if (sum1[t] > c1[t] || sum2[t] > c2[t]) return;
    }
    if (k == users.size()) {
      if (sum1 == c1 && sum2 == c2) {
        if (!have_best || current_utility > best_utility ||
            (current_utility == best_utility && current < best)) {
          have_best = true;
          best_utility = current_utility;
          best = current;
        }
      }
      return;
    }
    run(k + 1);
    for (const auto& p : users[k].prefs) {
      for (std::size_t t = 0; t < c1.size(); ++t) {
        sum1[t] += p.real_units[t];
        sum2[t] += p.imag_units[t];
      }
      current.emplace_back(users[k].user_id, p.pref_id);
      current_utility += p.utility;
      run(k + 1);
      current_utility -= p.utility;
      current.pop_back();
      for (std::size_t t = 0; t < c1.size(); ++t) {
        sum1[t] -= p.real_units[t];
        sum2[t] -= p.imag_units[t];
      }
    }
  }
};

}  // namespace

std::optional<std::pair<Selection, double>> exact_fit_solve(const std::vector<dkp::GridUser>& users,
                                                            const std::vector<long long>& c1,
                                                            const std::vector<long long>& c2,
                                                            const OracleBudget& budget) {
  if (c1.size() != c2.size()) throw precondition_error("exact_fit_solve: target length mismatch");
  double count = 1.0;
  for (const auto& u : users) count *= static_cast<double>(u.prefs.size() + 1);
  check_budget(count, budget, "exact_fit_solve");

  FitSearch search(users, c1, c2);
  search.run(0);
  if (!search.have_best) return std::nullopt;
  Selection sel;
  sel.chosen = search.best;
  sel.sort_canonical();
  return std::make_pair(std::move(sel), search.best_utility);
}

namespace {

struct MixedSearch {
  const Instance& instance;
  int grid;
  long long evaluations = 0;
  long long evaluation_cap;

  std::vector<ComplexPower> inelastic_load;
  std::vector<const DemandPreference*> elastic_chosen;
  double inelastic_utility = 0.0;
  double best_utility = 0.0;

  MixedSearch(const Instance& ins, int grid_resolution, long long cap)
      : instance(ins), grid(grid_resolution), evaluation_cap(cap),
        inelastic_load(ins.num_slots) {}

  bool loads_feasible(const std::vector<ComplexPower>& loads) const {
    for (int t = 0; t < instance.num_slots; ++t) {
      const double cap = instance.capacities[t];
      if (loads[t].magnitude() > cap + kFeasibilityTol * cap) return false;
    }
    return true;
  }

  void grid_search(std::size_t i, std::vector<ComplexPower>& loads, double utility) {
    if (++evaluations > evaluation_cap) {
      throw resource_error("exact_solve_mixed: grid search exceeds the oracle budget");
    }
    if (i == elastic_chosen.size()) {
      if (loads_feasible(loads)) best_utility = std::max(best_utility, utility);
      return;
    }
    const DemandPreference& p = *elastic_chosen[i];
    for (int g = 0; g <= grid; ++g) {
      const double x = static_cast<double>(g) / grid;
      std::vector<ComplexPower> next = loads;
      for (std::size_t w = 0; w < p.window.size(); ++w) {
        next[p.window[w] - 1] += x * p.values[w];
      }
      grid_search(i + 1, next, utility + x * p.utility);
    }
  }

  void choose(std::size_t k) {
    if (k == instance.users.size()) {
      std::vector<ComplexPower> loads = inelastic_load;
      grid_search(0, loads, inelastic_utility);
      return;
    }
    choose(k + 1);
    for (const auto& p : instance.users[k].preferences) {
      if (p.elastic()) {
        elastic_chosen.push_back(&p);
        choose(k + 1);
        elastic_chosen.pop_back();
      } else {
        for (std::size_t w = 0; w < p.window.size(); ++w) {
          inelastic_load[p.window[w] - 1] += p.values[w];
        }
        inelastic_utility += p.utility;
        choose(k + 1);
        inelastic_utility -= p.utility;
        for (std::size_t w = 0; w < p.window.size(); ++w) {
          inelastic_load[p.window[w] - 1] += {-p.values[w].re, -p.values[w].im};
        }
      }
    }
  }
};

}  // namespace

double exact_solve_mixed(const Instance& instance, int grid_resolution,
                         const OracleBudget& budget) {
  if (grid_resolution < 10) {
    throw precondition_error("exact_solve_mixed: grid_resolution must be at least 10");
  }
  MixedSearch search(instance, grid_resolution, budget.max_assignments);
  search.choose(0);
  return search.best_utility;
}

}  // namespace csched::oracle
