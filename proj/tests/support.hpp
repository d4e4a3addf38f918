#pragma once

// Shared builders and enumeration helpers for the test suites.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "csched/generator.hpp"
#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace test_support {

inline csched::DemandPreference pref(std::string id, double re, double im, double utility,
                                     std::vector<int> window = {1}, bool elastic = false) {
  csched::DemandPreference p;
  p.id = std::move(id);
  p.window = std::move(window);
  p.values.assign(p.window.size(), csched::ComplexPower{re, im});
  p.utility = utility;
  p.elasticity = elastic ? csched::Elasticity::Elastic : csched::Elasticity::Inelastic;
  return p;
}

inline csched::User user(std::string id, std::vector<csched::DemandPreference> prefs) {
  csched::User u;
  u.id = std::move(id);
  u.preferences = std::move(prefs);
  return u;
}

inline csched::Instance instance(std::vector<double> capacities, std::vector<csched::User> users) {
  csched::Instance ins;
  ins.num_slots = static_cast<int>(capacities.size());
  ins.capacities = std::move(capacities);
  ins.users = std::move(users);
  return ins;
}

// Calls fn for every assignment of at-most-one preference per user.
inline void for_each_selection(const csched::Instance& ins,
                               const std::function<void(const csched::Selection&)>& fn) {
  csched::Selection current;
  std::function<void(std::size_t)> walk = [&](std::size_t k) {
    if (k == ins.users.size()) {
      fn(current);
      return;
    }
    walk(k + 1);
    for (const auto& p : ins.users[k].preferences) {
      current.chosen.emplace_back(ins.users[k].id, p.id);
      walk(k + 1);
      current.chosen.pop_back();
    }
  };
  walk(0);
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }
  bool flip(double p = 0.5) { return uniform() < p; }
};

// A random selection respecting the at-most-one rule (not necessarily
// capacity-feasible).
inline csched::Selection random_selection(const csched::Instance& ins, Rng& rng) {
  csched::Selection sel;
  for (const auto& u : ins.users) {
    if (u.preferences.empty() || rng.flip(0.4)) continue;
    const auto& p = u.preferences[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(u.preferences.size()) - 1))];
    sel.chosen.emplace_back(u.id, p.id);
  }
  sel.sort_canonical();
  return sel;
}

inline csched::gen::GeneratorConfig small_config(std::uint64_t seed, int users, int slots,
                                                 double angle_max, int max_prefs = 3) {
  csched::gen::GeneratorConfig config;
  config.seed = seed;
  config.num_users = users;
  config.num_slots = slots;
  config.max_prefs_per_user = max_prefs;
  config.angle_max = angle_max;
  config.magnitude_lo = 1.0;
  config.magnitude_hi = 8.0;
  return config;
}

}  // namespace test_support
