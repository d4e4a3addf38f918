#include "csched/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "csched/errors.hpp"

namespace csched::greedy {

namespace {

struct Item {
  const std::string* pref_id;
  double magnitude;
  double utility;
};

double slope(double mag_a, double util_a, double mag_b, double util_b) {
  return (util_b - util_a) / (mag_b - mag_a);
}

}  // namespace

ReducedPreferenceSet reduce_preferences(const User& user) {
  std::vector<Item> items;
  for (const auto& p : user.preferences) {
    if (p.window.size() != 1 || p.window[0] != 1 || p.values.size() != 1) {
      throw precondition_error("reduce_preferences: pref '" + p.id +
                               "' is not a single-slot demand on slot 1");
    }
    if (p.values[0].re < 0.0) {
      throw precondition_error("reduce_preferences: pref '" + p.id +
                               "' lies outside the first quadrant");
    }
    items.push_back({&p.id, p.values[0].magnitude(), p.utility});
  }

  ReducedPreferenceSet out;
  out.user_id = user.id;

  // Zero-magnitude demands cost nothing; the best of them replaces the dummy
  // as the base level and is always selectable.
  ReducedLevel base;
  for (const auto& it : items) {
    if (it.magnitude == 0.0 &&
        (it.utility > base.utility ||
         (it.utility == base.utility && !base.pref_id.empty() && *it.pref_id < base.pref_id))) {
      base = {*it.pref_id, 0.0, it.utility};
    }
  }

  std::vector<Item> candidates;
  for (const auto& it : items) {
    if (it.magnitude > 0.0 && it.utility > base.utility) candidates.push_back(it);
  }
  std::sort(candidates.begin(), candidates.end(), [](const Item& a, const Item& b) {
    return std::tie(a.magnitude, b.utility, *a.pref_id) < std::tie(b.magnitude, a.utility, *b.pref_id);
  });

  // Rule (i): keep only strictly increasing utility along increasing magnitude.
  std::vector<Item> undominated;
  double last_utility = base.utility;
  for (const auto& it : candidates) {
    if (it.utility > last_utility) {
      undominated.push_back(it);
      last_utility = it.utility;
    }
  }

  // Rules (ii) and (iii): upper concave chain over (magnitude, utility) with
  // the base as anchor; non-strict slope comparisons drop ties, leaving
  // strictly decreasing incremental efficiencies.
  std::vector<ReducedLevel> chain;
  chain.push_back(base);
  for (const auto& it : undominated) {
    while (chain.size() >= 2) {
      const ReducedLevel& a = chain[chain.size() - 2];
      const ReducedLevel& b = chain.back();
      if (slope(a.magnitude, a.utility, b.magnitude, b.utility) <=
          slope(b.magnitude, b.utility, it.magnitude, it.utility)) {
        chain.pop_back();
      } else {
        break;
      }
    }
    chain.push_back({*it.pref_id, it.magnitude, it.utility});
  }

  out.levels = std::move(chain);
  return out;
}

namespace {

struct GreedyRun {
  std::vector<ReducedPreferenceSet> reduced;
  std::vector<IncrementalItem> items;  // efficiency-sorted
  std::vector<int> reached_level;      // per user, index into levels
  double capacity = 0.0;
  double used = 0.0;
  // Set when the run stopped by splitting an item fractionally.
  std::optional<std::size_t> split_user;
  int split_level = 0;
  double split_fraction = 0.0;
};

GreedyRun run_incremental_greedy(const Instance& instance, bool allow_split) {
  if (instance.num_slots != 1) {
    throw precondition_error("greedy requires a single time slot (m=1)");
  }
  GreedyRun run;
  run.capacity = instance.capacities[0];

  for (const auto& u : instance.users) run.reduced.push_back(reduce_preferences(u));

  for (std::size_t k = 0; k < run.reduced.size(); ++k) {
    const auto& levels = run.reduced[k].levels;
    for (std::size_t j = 1; j < levels.size(); ++j) {
      IncrementalItem item;
      item.user_id = run.reduced[k].user_id;
      item.level = static_cast<int>(j);
      item.delta_utility = levels[j].utility - levels[j - 1].utility;
      item.delta_magnitude = levels[j].magnitude - levels[j - 1].magnitude;
      run.items.push_back(item);
    }
  }
  std::sort(run.items.begin(), run.items.end(),
            [](const IncrementalItem& a, const IncrementalItem& b) {
              const double ea = a.efficiency();
              const double eb = b.efficiency();
              if (ea != eb) return ea > eb;
              return std::tie(a.user_id, a.level) < std::tie(b.user_id, b.level);
            });

  run.reached_level.assign(run.reduced.size(), 0);
  auto index_of = [&run](const std::string& user_id) {
    for (std::size_t k = 0; k < run.reduced.size(); ++k) {
      if (run.reduced[k].user_id == user_id) return k;
    }
    return run.reduced.size();
  };

  const double tol = kFeasibilityTol * run.capacity;
  for (const auto& item : run.items) {
    const std::size_t k = index_of(item.user_id);
    if (run.used + item.delta_magnitude <= run.capacity + tol) {
      run.reached_level[k] = item.level;
      run.used += item.delta_magnitude;
    } else {
      if (allow_split) {
        const double frac = (run.capacity - run.used) / item.delta_magnitude;
        if (frac > 0.0) {
          run.split_user = k;
          run.split_level = item.level;
          run.split_fraction = frac;
        }
      }
      break;  // greedy stops at the first overflow
    }
  }
  return run;
}

}  // namespace

FractionalResult solve_fractional(const Instance& instance) {
  GreedyRun run = run_incremental_greedy(instance, /*allow_split=*/true);

  FractionalResult out;
  for (std::size_t k = 0; k < run.reduced.size(); ++k) {
    const auto& set = run.reduced[k];
    const int reached = run.reached_level[k];
    if (run.split_user && *run.split_user == k) {
      const auto& hi = set.levels[run.split_level];
      const auto& lo = set.levels[run.split_level - 1];
      out.solution.entries.push_back({set.user_id, hi.pref_id, run.split_fraction});
      out.utility += run.split_fraction * hi.utility;
      if (!lo.pref_id.empty()) {
        out.solution.entries.push_back({set.user_id, lo.pref_id, 1.0 - run.split_fraction});
        out.utility += (1.0 - run.split_fraction) * lo.utility;
      }
      continue;
    }
    const auto& level = set.levels[reached];
    if (!level.pref_id.empty()) {
      out.solution.entries.push_back({set.user_id, level.pref_id, 1.0});
      out.utility += level.utility;
    }
  }
  out.solution.sort_canonical();
  return out;
}

SolveResult solve(const Instance& instance) {
  GreedyRun run = run_incremental_greedy(instance, /*allow_split=*/false);

  Selection packed;
  double packed_utility = 0.0;
  for (std::size_t k = 0; k < run.reduced.size(); ++k) {
    const auto& level = run.reduced[k].levels[run.reached_level[k]];
    if (!level.pref_id.empty()) {
      packed.chosen.emplace_back(run.reduced[k].user_id, level.pref_id);
      packed_utility += level.utility;
    }
  }

  // The alternative candidate: the single best-utility reduced demand, plus
  // every other user's free zero-magnitude base.
  std::size_t best_user = run.reduced.size();
  const ReducedLevel* best_level = nullptr;
  for (std::size_t k = 0; k < run.reduced.size(); ++k) {
    for (std::size_t j = 0; j < run.reduced[k].levels.size(); ++j) {
      const ReducedLevel& level = run.reduced[k].levels[j];
      if (level.pref_id.empty()) continue;
      if (best_level == nullptr || level.utility > best_level->utility ||
          (level.utility == best_level->utility &&
           std::tie(run.reduced[k].user_id, level.pref_id) <
               std::tie(run.reduced[best_user].user_id, best_level->pref_id))) {
        best_user = k;
        best_level = &level;
      }
    }
  }
  Selection single;
  double single_utility = 0.0;
  if (best_level != nullptr) {
    for (std::size_t k = 0; k < run.reduced.size(); ++k) {
      if (k == best_user) {
        single.chosen.emplace_back(run.reduced[k].user_id, best_level->pref_id);
        single_utility += best_level->utility;
      } else if (!run.reduced[k].levels[0].pref_id.empty()) {
        single.chosen.emplace_back(run.reduced[k].user_id, run.reduced[k].levels[0].pref_id);
        single_utility += run.reduced[k].levels[0].utility;
      }
    }
  }

  SolveResult result;
  result.solution.chosen = packed_utility >= single_utility ? packed : single;
  result.solution.sort_canonical();
  result.report = evaluate(instance, result.solution);
  result.report.solver_name = "greedy";
  return result;
}

}  // namespace csched::greedy
