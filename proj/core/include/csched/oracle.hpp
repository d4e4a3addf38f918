#pragma once

#include <optional>
#include <utility>

#include "csched/dkp.hpp"
#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::oracle {

// Cap on the number of assignments an exhaustive solve may enumerate.
struct OracleBudget {
  long long max_assignments = 20'000'000;
};

struct ExactResult {
  Selection selection;
  double utility = 0.0;
};

// Maximum-utility feasible selection by full enumeration. Requires the
// product of (|D_k| + 1) over users to fit the budget. Ties are broken by the
// lexicographically smallest sorted (user_id, pref_id) list, so the output is
// deterministic across runs and platforms.
ExactResult exact_solve(const Instance& instance, const OracleBudget& budget = {});

// Enumeration counterpart of dkp::dkp_exact: maximum-utility selection whose
// integer coordinate sums equal (c1, c2) exactly, or nullopt if none fits.
std::optional<std::pair<Selection, double>> exact_fit_solve(
    const std::vector<dkp::GridUser>& users, const std::vector<long long>& c1,
    const std::vector<long long>& c2, const OracleBudget& budget = {});

// Best utility of a mixed instance: integral preference choices enumerated
// exhaustively, elastic fractions searched on a uniform grid of [0, 1] with
// grid_resolution steps. A lower bound on the true mixed optimum with grid
// error at most (sum of elastic utilities) / grid_resolution.
double exact_solve_mixed(const Instance& instance, int grid_resolution,
                         const OracleBudget& budget = {});

}  // namespace csched::oracle
