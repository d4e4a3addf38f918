#pragma once

#include <functional>
#include <string>
#include <vector>

#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::ufp {

// One real-valued demand on a contiguous slot interval. Bags are users: at
// most one demand per user_id may be selected.
struct BagDemand {
  std::string user_id;
  std::string pref_id;
  double magnitude = 0.0;
  int start = 0;  // 1-based, inclusive
  int end = 0;    // inclusive
  double utility = 0.0;
};

struct RealBagInstance {
  int num_slots = 0;
  std::vector<double> capacities;
  std::vector<BagDemand> demands;
};

// Substitutes demand magnitudes for complex values. Requires first-quadrant
// demands that are constant over a contiguous window; offending preferences
// are rejected by identifier.
RealBagInstance to_bag_ufp(const Instance& instance);

// True iff the largest demand is at most the smallest capacity.
bool check_nba(const RealBagInstance& instance);

// Split into small and large demands at delta times the bottleneck capacity.
// The bottleneck slot is the smallest-capacity slot of the demand's interval,
// ties to the smallest index.
struct DeltaSplit {
  double delta = 0.5;
  std::vector<std::size_t> small;       // indices into RealBagInstance::demands
  std::vector<std::size_t> large;
  std::vector<int> bottleneck;          // per demand, 1-based slot
};

DeltaSplit make_delta_split(const RealBagInstance& instance, double delta);

// Local-ratio stack selection over the large demands: pairwise
// interval-disjoint, one per bag, utility at least half the best disjoint
// bag-respecting selection.
Selection solve_large_local_ratio(const RealBagInstance& instance, const DeltaSplit& split);

// Efficiency-greedy (utility per magnitude-slot) over the small demands,
// skipping insertions that would break feasibility. No ratio guarantee.
Selection solve_small_greedy(const RealBagInstance& instance, const DeltaSplit& split);

// Any algorithm producing a bag-feasible selection of a real instance.
using BagSolver = std::function<Selection(const RealBagInstance&)>;

// Exhaustive bag optimum for small instances; the product of per-user choice
// counts must fit the budget. Deterministic tie-break as in the oracle.
Selection solve_bag_exact(const RealBagInstance& instance,
                          long long max_assignments = 20'000'000);

// Efficiency-greedy baseline over all demands.
Selection solve_bag_greedy(const RealBagInstance& instance);

// Reduction round trip: to_bag_ufp, any bag solver, carry_back.
SolveResult solve_via_bag(const Instance& instance, const BagSolver& solver);

// Solves the small and large sub-instances separately and carries the better
// selection back to the complex instance. Requires the no-bottleneck
// assumption; a violating demand is named in the error.
SolveResult solve_split(const Instance& instance, double delta);

// Re-certifies a bag-feasible selection on the complex instance. Feasibility
// of the result is guaranteed by the triangle inequality; a failure indicates
// an upstream solver bug.
SolveResult carry_back(const Instance& instance, const Selection& bag_selection);

// The crossing limit 2 * floor(sec(phi/2) / delta^2).
long long crossing_bound(double phi, double delta);

// True iff at every slot the number of selected delta-large demands crossing
// it is at most crossing_bound(phi, delta).
bool crossing_bound_check(const Instance& instance, const Selection& selection, double delta);

}  // namespace csched::ufp
