#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "csched/instance.hpp"

namespace csched {

// Absolute feasibility tolerance, scaled by the slot capacity.
inline constexpr double kFeasibilityTol = 1e-9;

// Integral assignment as (user_id, pref_id) pairs. The at-most-one-per-user
// rule is a property checked by is_feasible, not enforced by the container,
// so invalid assignments remain representable for diagnostics.
struct Selection {
  std::vector<std::pair<std::string, std::string>> chosen;

  void sort_canonical();
  bool operator==(const Selection&) const = default;
};

struct FractionalAssignment {
  std::string user_id;
  std::string pref_id;
  double value = 0.0;  // in [0, 1]

  friend bool operator==(const FractionalAssignment&, const FractionalAssignment&) = default;
};

// A fractional assignment with per-user total at most 1.
struct FractionalSolution {
  std::vector<FractionalAssignment> entries;

  void sort_canonical();
  double value_of(const std::string& user_id, const std::string& pref_id) const;
  bool operator==(const FractionalSolution&) const = default;
};

// Solver output: integral choices plus fractional values (elastic demands or
// relaxation output). Pure integral solvers leave `fractional` empty.
struct Solution {
  Selection chosen;
  std::vector<FractionalAssignment> fractional;

  void sort_canonical();
  bool operator==(const Solution&) const = default;
};

struct SolveReport {
  double utility = 0.0;
  std::vector<ComplexPower> per_slot_load;
  double violation_beta = 1.0;  // max_t |load_t| / C_t, clamped below at 1
  std::string solver_name;
  std::chrono::duration<double, std::milli> elapsed{0.0};
};

struct SolveResult {
  Solution solution;
  SolveReport report;
};

// Per-slot loads, total utility and violation factor of an assignment.
// Unknown user or preference ids are rejected with the offending identifier.
SolveReport evaluate(const Instance& instance, const Selection& selection);
SolveReport evaluate(const Instance& instance, const Solution& solution);

// True iff the at-most-one rule holds and every slot satisfies
// |load_t| <= beta * C_t + tol. Requires beta >= 1.
bool is_feasible(const Instance& instance, const Selection& selection, double beta);
bool is_feasible(const Instance& instance, const Solution& solution, double beta);

}  // namespace csched
