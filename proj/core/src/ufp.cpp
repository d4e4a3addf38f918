#include "csched/ufp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "csched/errors.hpp"

namespace csched::ufp {

RealBagInstance to_bag_ufp(const Instance& instance) {
  RealBagInstance out;
  out.num_slots = instance.num_slots;
  out.capacities = instance.capacities;
  for (const auto& u : instance.users) {
    for (const auto& p : u.preferences) {
      if (!p.contiguous_window()) {
        throw precondition_error("to_bag_ufp: pref '" + p.id + "' of user '" + u.id +
                                 "' has a non-contiguous window");
      }
      for (const auto& v : p.values) {
        if (v.re < 0.0) {
          throw precondition_error("to_bag_ufp: pref '" + p.id + "' of user '" + u.id +
                                   "' lies outside the first quadrant");
        }
        if (!(v == p.values.front())) {
          throw precondition_error("to_bag_ufp: pref '" + p.id + "' of user '" + u.id +
                                   "' is not constant over its window");
        }
      }
      BagDemand d;
      d.user_id = u.id;
      d.pref_id = p.id;
      d.magnitude = p.values.front().magnitude();
      d.start = p.window.front();
      d.end = p.window.back();
      d.utility = p.utility;
      out.demands.push_back(std::move(d));
    }
  }
  return out;
}

bool check_nba(const RealBagInstance& instance) {
  if (instance.demands.empty()) return true;
  double max_demand = 0.0;
  for (const auto& d : instance.demands) max_demand = std::max(max_demand, d.magnitude);
  const double min_cap =
      *std::min_element(instance.capacities.begin(), instance.capacities.end());
  return max_demand <= min_cap * (1.0 + kFeasibilityTol);
}

DeltaSplit make_delta_split(const RealBagInstance& instance, double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw precondition_error("delta must lie in (0, 1], got " + std::to_string(delta));
  }
  DeltaSplit split;
  split.delta = delta;
  split.bottleneck.resize(instance.demands.size());
  for (std::size_t i = 0; i < instance.demands.size(); ++i) {
    const BagDemand& d = instance.demands[i];
    int bottleneck = d.start;
    for (int t = d.start + 1; t <= d.end; ++t) {
      if (instance.capacities[t - 1] < instance.capacities[bottleneck - 1]) bottleneck = t;
    }
    split.bottleneck[i] = bottleneck;
    if (d.magnitude <= delta * instance.capacities[bottleneck - 1]) {
      split.small.push_back(i);
    } else {
      split.large.push_back(i);
    }
  }
  return split;
}

namespace {

bool intervals_overlap(const BagDemand& a, const BagDemand& b) {
  return a.start <= b.end && b.start <= a.end;
}

}  // namespace

Selection solve_large_local_ratio(const RealBagInstance& instance, const DeltaSplit& split) {
  struct Node {
    std::size_t demand;
    double residual;
    bool active;
  };
  std::vector<Node> nodes;
  for (std::size_t i : split.large) {
    nodes.push_back({i, instance.demands[i].utility, true});
  }

  double utility_scale = 0.0;
  for (const auto& n : nodes) utility_scale = std::max(utility_scale, n.residual);
  const double tol = 1e-12 * std::max(1.0, utility_scale);

  // Local-ratio decomposition: repeatedly pick the active demand with the
  // earliest right endpoint, subtract its residual from everything in
  // conflict with it (overlapping interval or same bag, itself included) and
  // push it. The reverse unwind keeps any compatible pushed demand.
  std::vector<std::size_t> stack;
  while (true) {
    const Node* pick = nullptr;
    for (const auto& n : nodes) {
      if (!n.active) continue;
      if (pick == nullptr) {
        pick = &n;
        continue;
      }
      const BagDemand& a = instance.demands[n.demand];
      const BagDemand& b = instance.demands[pick->demand];
      if (std::tie(a.end, a.start, a.user_id, a.pref_id) <
          std::tie(b.end, b.start, b.user_id, b.pref_id)) {
        pick = &n;
      }
    }
    if (pick == nullptr) break;
    const BagDemand& chosen = instance.demands[pick->demand];
    const double w = pick->residual;
    for (auto& n : nodes) {
      if (!n.active) continue;
      const BagDemand& d = instance.demands[n.demand];
      if (intervals_overlap(d, chosen) || d.user_id == chosen.user_id) {
        n.residual -= w;
        if (n.residual <= tol) n.active = false;
      }
    }
    stack.push_back(pick->demand);
  }

  Selection out;
  std::vector<std::size_t> taken;
  std::set<std::string> used_users;
  for (std::size_t s = stack.size(); s-- > 0;) {
    const BagDemand& d = instance.demands[stack[s]];
    bool compatible = !used_users.contains(d.user_id);
    for (std::size_t i : taken) {
      compatible = compatible && !intervals_overlap(instance.demands[i], d);
    }
    if (compatible) {
      taken.push_back(stack[s]);
      used_users.insert(d.user_id);
      out.chosen.emplace_back(d.user_id, d.pref_id);
    }
  }
  out.sort_canonical();
  return out;
}

Selection solve_small_greedy(const RealBagInstance& instance, const DeltaSplit& split) {
  std::vector<std::size_t> order = split.small;
  std::sort(order.begin(), order.end(), [&instance](std::size_t a, std::size_t b) {
    const BagDemand& da = instance.demands[a];
    const BagDemand& db = instance.demands[b];
    const double ea = da.utility / (da.magnitude * (da.end - da.start + 1));
    const double eb = db.utility / (db.magnitude * (db.end - db.start + 1));
    if (ea != eb) return ea > eb;
    return std::tie(da.user_id, da.pref_id) < std::tie(db.user_id, db.pref_id);
  });

  std::vector<double> load(instance.num_slots, 0.0);
  std::set<std::string> used_users;
  Selection out;
  for (std::size_t i : order) {
    const BagDemand& d = instance.demands[i];
    if (used_users.contains(d.user_id)) continue;
    bool fits = true;
    for (int t = d.start; t <= d.end && fits; ++t) {
      const double cap = instance.capacities[t - 1];
      fits = load[t - 1] + d.magnitude <= cap + kFeasibilityTol * cap;
    }
    if (!fits) continue;
    for (int t = d.start; t <= d.end; ++t) load[t - 1] += d.magnitude;
    used_users.insert(d.user_id);
    out.chosen.emplace_back(d.user_id, d.pref_id);
  }
  out.sort_canonical();
  return out;
}

Selection solve_bag_exact(const RealBagInstance& instance, long long max_assignments) {
  // Demands grouped per bag; one DFS level per user, option none first.
  std::vector<std::string> users;
  for (const auto& d : instance.demands) {
    if (std::find(users.begin(), users.end(), d.user_id) == users.end()) {
      users.push_back(d.user_id);
    }
  }
  std::sort(users.begin(), users.end());
  std::vector<std::vector<const BagDemand*>> per_user(users.size());
  for (const auto& d : instance.demands) {
    const std::size_t k =
        std::find(users.begin(), users.end(), d.user_id) - users.begin();
    per_user[k].push_back(&d);
  }
  double count = 1.0;
  for (auto& group : per_user) {
    std::sort(group.begin(), group.end(),
              [](const BagDemand* a, const BagDemand* b) { return a->pref_id < b->pref_id; });
    count *= static_cast<double>(group.size() + 1);
  }
  if (count > static_cast<double>(max_assignments)) {
    throw resource_error("solve_bag_exact: " + std::to_string(count) +
                         " assignments exceed the budget of " + std::to_string(max_assignments));
  }

  std::vector<double> load(instance.num_slots, 0.0);
  std::vector<std::pair<std::string, std::string>> current, best;
  double current_utility = 0.0, best_utility = 0.0;
  bool have_best = false;

  std::function<void(std::size_t)> walk = [&](std::size_t k) {
    for (int t = 0; t < instance.num_slots; ++t) {
      const double cap = instance.capacities[t];
      if (load[t] > cap + kFeasibilityTol * cap) return;
    }
    if (k == users.size()) {
      if (!have_best || current_utility > best_utility ||
          (current_utility == best_utility && current < best)) {
        have_best = true;
        best_utility = current_utility;
        best = current;
      }
      return;
    }
    walk(k + 1);
    for (const BagDemand* d : per_user[k]) {
      for (int t = d->start; t <= d->end; ++t) load[t - 1] += d->magnitude;
      current.emplace_back(d->user_id, d->pref_id);
      current_utility += d->utility;
      walk(k + 1);
      current_utility -= d->utility;
      current.pop_back();
      for (int t = d->start; t <= d->end; ++t) load[t - 1] -= d->magnitude;
    }
  };
  walk(0);

  Selection out;
  out.chosen = best;
  out.sort_canonical();
  return out;
}

Selection solve_bag_greedy(const RealBagInstance& instance) {
  DeltaSplit all;
  for (std::size_t i = 0; i < instance.demands.size(); ++i) all.small.push_back(i);
  return solve_small_greedy(instance, all);
}

SolveResult solve_via_bag(const Instance& instance, const BagSolver& solver) {
  const RealBagInstance bag = to_bag_ufp(instance);
  SolveResult result = carry_back(instance, solver(bag));
  result.report.solver_name = "ufp-plugged";
  return result;
}

namespace {

bool bag_feasible(const RealBagInstance& instance, const Selection& selection,
                  std::string* complaint) {
  std::vector<double> load(instance.num_slots, 0.0);
  std::map<std::string, int> per_user;
  for (const auto& [user_id, pref_id] : selection.chosen) {
    const BagDemand* found = nullptr;
    for (const auto& d : instance.demands) {
      if (d.user_id == user_id && d.pref_id == pref_id) {
        found = &d;
        break;
      }
    }
    if (found == nullptr) {
      if (complaint != nullptr) *complaint = "unknown demand '" + user_id + "'/'" + pref_id + "'";
      return false;
    }
    if (++per_user[user_id] > 1) {
      if (complaint != nullptr) *complaint = "two demands selected for user '" + user_id + "'";
      return false;
    }
    for (int t = found->start; t <= found->end; ++t) load[t - 1] += found->magnitude;
  }
  for (int t = 0; t < instance.num_slots; ++t) {
    const double cap = instance.capacities[t];
    if (load[t] > cap + kFeasibilityTol * cap) {
      if (complaint != nullptr) {
        *complaint = "slot " + std::to_string(t + 1) + " overloaded: " + std::to_string(load[t]) +
                     " > " + std::to_string(cap);
      }
      return false;
    }
  }
  return true;
}

}  // namespace

SolveResult solve_split(const Instance& instance, double delta) {
  const RealBagInstance bag = to_bag_ufp(instance);
  if (!check_nba(bag)) {
    const auto worst = std::max_element(
        bag.demands.begin(), bag.demands.end(),
        [](const BagDemand& a, const BagDemand& b) { return a.magnitude < b.magnitude; });
    throw precondition_error("no-bottleneck assumption violated: demand '" + worst->user_id +
                             "'/'" + worst->pref_id + "' of magnitude " +
                             std::to_string(worst->magnitude) + " exceeds the smallest capacity");
  }
  const DeltaSplit split = make_delta_split(bag, delta);
  const Selection large = solve_large_local_ratio(bag, split);
  const Selection small = solve_small_greedy(bag, split);

  double large_utility = 0.0;
  for (const auto& [u, p] : large.chosen) large_utility += instance.find_preference(u, p)->utility;
  double small_utility = 0.0;
  for (const auto& [u, p] : small.chosen) small_utility += instance.find_preference(u, p)->utility;

  SolveResult result = carry_back(instance, large_utility >= small_utility ? large : small);
  result.report.solver_name = "ufp";
  return result;
}

SolveResult carry_back(const Instance& instance, const Selection& bag_selection) {
  const RealBagInstance bag = to_bag_ufp(instance);
  std::string complaint;
  if (!bag_feasible(bag, bag_selection, &complaint)) {
    throw precondition_error("carry_back: selection is not bag-feasible: " + complaint);
  }
  SolveResult result;
  result.solution.chosen = bag_selection;
  result.solution.sort_canonical();
  result.report = evaluate(instance, result.solution);
  result.report.solver_name = "ufp-carry-back";
  if (!is_feasible(instance, result.solution, 1.0)) {
    throw std::logic_error("carry_back: bag-feasible selection is not complex-feasible");
  }
  return result;
}

long long crossing_bound(double phi, double delta) {
  const double bound_real = (1.0 / std::cos(phi / 2.0)) / (delta * delta);
  return 2 * static_cast<long long>(std::floor(bound_real + 1e-9));
}

bool crossing_bound_check(const Instance& instance, const Selection& selection, double delta) {
  const RealBagInstance bag = to_bag_ufp(instance);
  const DeltaSplit split = make_delta_split(bag, delta);
  const double phi = angle_stats(instance).phi;
  const long long bound = crossing_bound(phi, delta);

  std::set<std::pair<std::string, std::string>> chosen(selection.chosen.begin(),
                                                       selection.chosen.end());
  std::vector<long long> crossing(instance.num_slots, 0);
  for (std::size_t i : split.large) {
    const BagDemand& d = bag.demands[i];
    if (!chosen.contains({d.user_id, d.pref_id})) continue;
    for (int t = d.start; t <= d.end; ++t) ++crossing[t - 1];
  }
  for (int t = 0; t < instance.num_slots; ++t) {
    if (crossing[t] > bound) return false;
  }
  return true;
}

}  // namespace csched::ufp
