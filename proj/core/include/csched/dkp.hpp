#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csched/solution.hpp"

namespace csched::dkp {

// A demand rounded onto an integer grid: one nonnegative integer pair per
// slot (real units, imaginary units), zero outside the original window.
struct GridPref {
  std::string pref_id;
  std::vector<long long> real_units;
  std::vector<long long> imag_units;
  double utility = 0.0;
};

struct GridUser {
  std::string user_id;
  std::vector<GridPref> prefs;
};

inline constexpr long long kDefaultTableEntryCap = 200'000'000;

// Exact-fit dynamic program over 2m integer coordinates. The table holds, for
// the first k users, the best utility of a selection (at most one preference
// per user, skipping allowed) whose coordinate sums hit a state exactly.
// States with any coordinate above the construction bounds are unreachable by
// queries. Building the table once at the grid bounds answers every exact-fit
// target by lookup.
class ExactFitTable {
 public:
  ExactFitTable(const std::vector<GridUser>& users, std::vector<long long> real_bounds,
                std::vector<long long> imag_bounds,
                long long entry_cap = kDefaultTableEntryCap);

  // Best utility of an exact fit at the target, or nullopt if unreachable.
  std::optional<double> best_utility(const std::vector<long long>& real_target,
                                     const std::vector<long long>& imag_target) const;

  // The selection behind best_utility; requires a reachable target.
  Selection reconstruct(const std::vector<long long>& real_target,
                        const std::vector<long long>& imag_target) const;

  // Visits every reachable state of the full user set with its best utility.
  // The reachable set is tiny next to the state space, so callers can match
  // targets against it instead of sweeping the whole grid.
  void for_each_reachable(
      const std::function<void(const std::vector<long long>& real_coords,
                               const std::vector<long long>& imag_coords, double utility)>& fn)
      const;

  long long state_count() const { return state_count_; }

 private:
  long long state_index(const std::vector<long long>& real_target,
                        const std::vector<long long>& imag_target) const;

  std::vector<GridUser> users_;
  std::vector<long long> real_bounds_;
  std::vector<long long> imag_bounds_;
  std::vector<long long> strides_;  // 2m strides, real coords then imaginary
  long long state_count_ = 0;
  std::vector<double> value_;         // final layer
  std::vector<std::int16_t> choice_;  // per user layer: 0 = skip, j+1 = pref j
};

// Maximum-utility selection whose per-slot coordinate sums equal (c1, c2)
// exactly, or nullopt when no selection fits. Coordinates and targets must be
// nonnegative.
std::optional<std::pair<Selection, double>> dkp_exact(
    const std::vector<GridUser>& users, const std::vector<long long>& c1,
    const std::vector<long long>& c2, long long entry_cap = kDefaultTableEntryCap);

}  // namespace csched::dkp
