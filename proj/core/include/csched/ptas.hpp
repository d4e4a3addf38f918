#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::ptas {

// Per-guess measurements, observable through Config::audit.
struct GuessAudit {
  std::vector<std::pair<std::string, std::string>> s1;
  std::size_t s1_cap = 0;              // ceil(8m / epsilon)
  double s1_utility_sum = 0.0;
  double relaxation_objective = 0.0;   // u(x_cx)
  double purified_objective = 0.0;     // u(x_lp)
  int fractional_free_count = 0;       // after purification, excluding fixed vars
  double round_down_loss = 0.0;        // u(x_lp) - u(rounded)
};

// Replacement for the built-in relaxation solver. Must return a point that is
// hard-feasible for the relaxation with x pinned to 1 on s1 and 0 on s0, with
// objective within delta of the relaxation optimum.
using RelaxationSolver = std::function<FractionalSolution(
    const Instance&, const Selection& s1, const Selection& s0, double delta)>;

struct Config {
  double epsilon = 0.5;
  // Cap on candidate guess sets examined during enumeration.
  long long enumeration_cap = 5'000'000;
  int fw_max_iterations = 4000;
  std::function<void(const GuessAudit&)> audit;
  RelaxationSolver relaxation;  // empty uses the built-in solver
};

// Real and imaginary per-slot loads of a relaxation solution; the LP budgets.
struct ProjectionBudget {
  std::vector<double> real_load;
  std::vector<double> imag_load;
};

// Approximately solves the convex relaxation with x fixed to 1 on s1 and to
// 0 on s0: per-slot quadratic load constraints, per-user sums at most one.
// The result is hard-feasible with objective within delta of the relaxation
// optimum. s1 must be internally feasible with at most one preference per
// user. The solver is projection-free: penalized conditional-gradient steps
// with a duality-gap certificate, followed by scaling of the free part back
// into the feasible region.
FractionalSolution solve_relaxation(const Instance& instance, const Selection& s1,
                                    const Selection& s0, double delta,
                                    int max_iterations = 4000);

ProjectionBudget projection_budget(const Instance& instance, const FractionalSolution& x);

// Moves x_start to a vertex of the linear program with per-slot real and
// imaginary budget rows, per-user rows, and x fixed at its x_start value on
// `fixed`, never decreasing the objective: repeatedly finds a direction
// supported on fractional free variables in the kernel of the tight rows and
// walks until something new becomes tight. A vertex has at most 4m
// fractional free components.
FractionalSolution purify_to_bfs(const Instance& instance, const ProjectionBudget& budget,
                                 const FractionalSolution& x_start,
                                 const std::vector<std::pair<std::string, std::string>>& fixed);

// Guess enumeration over feasible sets of up to ceil(8m/epsilon) largest
// inelastic demands, relaxation, budget LP purification and round-down.
// Output is feasible without violation and within (1 - epsilon) of optimal.
SolveResult solve_ptas(const Instance& instance, const Config& config);

}  // namespace csched::ptas
