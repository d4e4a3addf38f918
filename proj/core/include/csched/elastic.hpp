#pragma once

#include <functional>
#include <string>
#include <vector>

#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::elastic {

// A computable lower bound on the mixed optimum: the best single inelastic
// utility, or the best elastic preference scaled to fit the tightest slot of
// its window, whichever is larger. Requires at least one preference.
double compute_lb(const Instance& instance);

// One inelastic level standing in for a fraction of an elastic preference.
struct ElasticLevel {
  std::string user_id;
  std::string orig_pref_id;
  std::string level_pref_id;
  int level = 0;        // 1-based
  double fraction = 0.0;  // in (0, 1]
};

struct Discretized {
  Instance instance;  // fully inelastic
  std::vector<ElasticLevel> levels;

  const ElasticLevel* find_level(const std::string& user_id,
                                 const std::string& level_pref_id) const;
};

// Replaces each elastic preference by a geometric ladder of inelastic levels
// sharing the user's bag: level i carries fraction eps*LB*(1+eps)^i / (n*u)
// of the demand and utility, capped at 1 so the top level is the full
// preference. Inelastic preferences are copied unchanged.
Discretized discretize(const Instance& instance, double epsilon);

// Maps a selection on the discretized instance back to the mixed instance:
// inelastic choices are copied, a chosen level becomes a fractional value.
// Per-slot loads are preserved exactly.
Solution map_back(const Selection& level_selection, const Discretized& discretized);

using InnerSolver = std::function<SolveResult(const Instance&)>;

// Discretize, solve with any inelastic solver, map back. Inherits the inner
// solver's violation factor; with an (alpha, beta) inner solver the mapped
// utility is at least (1 - epsilon) * alpha times the mixed optimum.
SolveResult solve_mixed(const Instance& instance, double epsilon, const InnerSolver& inner);

}  // namespace csched::elastic
