#pragma once

#include <string>
#include <vector>

#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::greedy {

// One level of a user's reduced preference chain. Level 0 is the base: the
// dummy (empty pref_id, zero magnitude, zero utility), or the best
// zero-magnitude demand when the user has one.
struct ReducedLevel {
  std::string pref_id;
  double magnitude = 0.0;
  double utility = 0.0;
};

// Dominance-reduced single-slot preference set: magnitudes and utilities
// strictly increase across levels, efficiencies relative to the base strictly
// decrease, and incremental efficiencies strictly decrease.
struct ReducedPreferenceSet {
  std::string user_id;
  std::vector<ReducedLevel> levels;  // levels[0] is the base
};

// One entry of the merged incremental item list: stepping a user from
// level - 1 to level buys delta_utility for delta_magnitude of capacity.
struct IncrementalItem {
  std::string user_id;
  int level = 0;  // >= 1
  double delta_utility = 0.0;
  double delta_magnitude = 0.0;
  double efficiency() const { return delta_utility / delta_magnitude; }
};

// Applies the three dominance rules to a user's single-slot demands:
// (i)  larger magnitude with no larger utility is dropped;
// (ii) smaller magnitude with no larger efficiency is dropped;
// (iii) a middle demand whose incremental efficiency does not exceed the next
//       one is dropped.
// Ties keep the higher-utility demand, then smaller magnitude, then smaller
// pref id. Requires every preference to occupy exactly slot 1 and demands in
// the first quadrant.
ReducedPreferenceSet reduce_preferences(const User& user);

struct FractionalResult {
  FractionalSolution solution;
  double utility = 0.0;
};

// Optimal solution of the magnitude relaxation: incremental items in
// non-increasing efficiency order are packed until the first overflow, which
// is split fractionally between the overflowing item's level and the level
// below it. At most two fractional variables, in one user's adjacent levels.
FractionalResult solve_fractional(const Instance& instance);

// Single-slot greedy: packs incremental items until the first overflow, drops
// the fractional part, and returns the better of that and the single
// best-utility demand. Output is feasible without violation. Requires one
// slot and first-quadrant demands.
SolveResult solve(const Instance& instance);

}  // namespace csched::greedy
