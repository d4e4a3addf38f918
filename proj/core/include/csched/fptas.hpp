#pragma once

#include <optional>
#include <vector>

#include "csched/dkp.hpp"
#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched::fptas {

struct Config {
  double epsilon = 0.25;
  // The guess space and table are exponential in the slot count.
  int max_slots = 3;
  // phi must stay below pi by at least this margin so tan(theta) is finite.
  double angle_margin = 1e-6;
  long long guess_cap = 400'000'000;
  long long table_entry_cap = dkp::kDefaultTableEntryCap;
};

// Per-slot rounding granularity L_t = epsilon * C_t / (n * (tan(theta) + 1)).
struct RoundingScale {
  std::vector<double> unit;
  double tan_theta = 0.0;
};

// Signed grid multiples of one demand value: the imaginary part rounds up,
// the real part rounds up when nonnegative and down otherwise, so rounding
// never moves a coordinate toward zero.
struct RoundedValue {
  long long real_units = 0;
  long long imag_units = 0;
};

RoundedValue round_value(const ComplexPower& value, double unit);

// A demand-rounded instance split into first-quadrant and second-quadrant
// user groups. Second-quadrant real parts are stored negated so every stored
// coordinate is nonnegative, ready for the exact-fit table.
struct RoundedInstance {
  RoundingScale scale;
  std::vector<dkp::GridUser> plus_users;
  std::vector<dkp::GridUser> minus_users;

  // Signed rounded value of a demand at a slot (units of L_t), zero outside
  // the window.
  ComplexPower rounded_value_of(const std::string& user_id, const std::string& pref_id,
                                int slot) const;
};

// Rounds every demand of a validated instance. Requires 0 < epsilon < 1 and
// phi < pi (tan(theta) finite).
RoundedInstance round_demands(const Instance& instance, double epsilon,
                              double angle_margin = 1e-6);

// Upper bounds, in units of L_t, of the four guessed projection vectors. The
// base bounds follow the projection limits C_t(1+tan theta), C_t tan theta and
// C_t; each is then extended by the worst-case rounding slack (one unit per
// user on the corresponding side) so the rounded projection of every feasible
// solution lies on the grid. Sides without users collapse to {0}.
struct GuessGrid {
  std::vector<long long> xi_plus_max;
  std::vector<long long> xi_minus_max;
  std::vector<long long> zeta_plus_max;
  std::vector<long long> zeta_minus_max;
  double raw_tuple_count = 1.0;  // before the admissibility filter
};

GuessGrid make_guess_grid(const Instance& instance, const RoundedInstance& rounded,
                          double epsilon);

// One guessed tuple of per-slot projections, in units of L_t.
struct GuessVector {
  std::vector<long long> xi_plus;
  std::vector<long long> xi_minus;
  std::vector<long long> zeta_plus;
  std::vector<long long> zeta_minus;
};

// Streams admissible guesses in lexicographic order over the flattened
// (xi_plus, xi_minus, zeta_plus, zeta_minus) coordinates, slot-major. A guess
// is admissible when every slot satisfies
//   (xi_plus - xi_minus)^2 + (zeta_plus + zeta_minus)^2 <= ((1+2eps) C_t)^2.
class GuessEnumerator {
 public:
  GuessEnumerator(const Instance& instance, const RoundedInstance& rounded,
                  const GuessGrid& grid, double epsilon);

  // Next admissible guess, or nullopt when exhausted.
  std::optional<GuessVector> next();

 private:
  bool admissible() const;
  bool advance();

  std::vector<long long> coords_;  // 4m odometer digits
  std::vector<long long> maxima_;
  std::vector<double> unit_;       // L_t per digit
  std::vector<double> cap_sq_;     // ((1+2eps) C_t)^2 per slot
  std::size_t slots_ = 0;
  bool exhausted_ = false;
  bool first_ = true;
};

// Bi-criteria solve: utility at least the exact integral optimum, per-slot
// loads within (1 + 4 epsilon) of capacity. Ties between equal-utility
// guesses go to the lexicographically smallest guess vector.
SolveResult solve_bifptas(const Instance& instance, const Config& config);

}  // namespace csched::fptas
