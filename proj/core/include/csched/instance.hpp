#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "csched/power.hpp"

namespace csched {

enum class Elasticity { Inelastic, Elastic };

// One candidate demand of a user: a slot window, complex values aligned with
// the window, a utility gained if selected, and an elasticity tag. Windows
// are arbitrary slot subsets; contiguity is required only by the bag-UFP
// reduction, which checks it itself.
struct DemandPreference {
  std::string id;
  std::vector<int> window;           // sorted 1-based slot indices
  std::vector<ComplexPower> values;  // values[i] applies at window[i]
  double utility = 0.0;
  Elasticity elasticity = Elasticity::Inelastic;

  bool elastic() const { return elasticity == Elasticity::Elastic; }
  bool contiguous_window() const;
  // Value at a slot, or nullptr when the slot is outside the window.
  const ComplexPower* value_at(int slot) const;
};

struct User {
  std::string id;
  std::vector<DemandPreference> preferences;
};

// A scheduling instance over num_slots time slots with per-slot apparent
// power capacities. Construction does not validate; call validate().
struct Instance {
  int num_slots = 0;
  std::vector<double> capacities;
  std::vector<User> users;

  const User* find_user(const std::string& user_id) const;
  const DemandPreference* find_preference(const std::string& user_id,
                                          const std::string& pref_id) const;
  std::size_t total_preferences() const;
};

// Every violated invariant as a human-readable message; empty means valid.
// Checked: slot indices in range, window/value alignment, finite values,
// demands in the upper half-plane with argument in [0, pi), positive
// utilities, |s(t)| <= C_t, one sign pattern of the active component per
// user, positive capacities.
std::vector<std::string> validate(const Instance& instance);

struct AngleStats {
  double phi = 0.0;    // largest demand argument over all users, slots
  double theta = 0.0;  // max(phi - pi/2, 0)
};

// phi/theta of a validated instance; an instance without demands has phi = 0.
AngleStats angle_stats(const Instance& instance);

// Every demand value multiplied by e^{i rho}.
Instance rotated(const Instance& instance, double rho);

// Rotates so the smallest demand argument lands on the positive real axis.
// Accepts any instance whose demand arguments span less than pi, including
// fourth-quadrant inputs; the result passes the half-plane validation.
Instance normalize_rotation(const Instance& instance);

}  // namespace csched
