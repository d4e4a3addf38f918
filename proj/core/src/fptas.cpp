#include "csched/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csched/errors.hpp"

namespace csched::fptas {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kHalfPi = 1.5707963267948966;

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw precondition_error("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

double tan_theta_of(const Instance& instance, double angle_margin) {
  const AngleStats stats = angle_stats(instance);
  if (stats.phi >= kPi - angle_margin) {
    throw precondition_error("demand arguments reach pi - " + std::to_string(angle_margin) +
                             "; tan(theta) is unbounded");
  }
  if (stats.theta >= kHalfPi) {
    throw precondition_error("theta >= pi/2; tan(theta) undefined");
  }
  return std::tan(stats.theta);
}

}  // namespace

RoundedValue round_value(const ComplexPower& value, double unit) {
  RoundedValue out;
  out.imag_units = static_cast<long long>(std::ceil(value.im / unit));
  out.real_units = value.re >= 0.0 ? static_cast<long long>(std::ceil(value.re / unit))
                                   : static_cast<long long>(std::floor(value.re / unit));
  return out;
}

ComplexPower RoundedInstance::rounded_value_of(const std::string& user_id,
                                               const std::string& pref_id, int slot) const {
  const auto scan = [&](const std::vector<dkp::GridUser>& group, double sign) -> std::optional<ComplexPower> {
    for (const auto& u : group) {
      if (u.user_id != user_id) continue;
      for (const auto& p : u.prefs) {
        if (p.pref_id != pref_id) continue;
        const double unit = scale.unit[slot - 1];
        return ComplexPower{sign * static_cast<double>(p.real_units[slot - 1]) * unit,
                            static_cast<double>(p.imag_units[slot - 1]) * unit};
      }
    }
    return std::nullopt;
  };
  if (auto v = scan(plus_users, 1.0)) return *v;
  if (auto v = scan(minus_users, -1.0)) return *v;
  throw precondition_error("rounded_value_of: unknown demand '" + user_id + "'/'" + pref_id + "'");
}

RoundedInstance round_demands(const Instance& instance, double epsilon, double angle_margin) {
  check_epsilon(epsilon);
  const double tan_theta = tan_theta_of(instance, angle_margin);
  const std::size_t n = instance.users.size();
  if (n == 0) {
    RoundedInstance empty;
    empty.scale.tan_theta = tan_theta;
    empty.scale.unit.assign(instance.num_slots, 1.0);
    return empty;
  }

  RoundedInstance out;
  out.scale.tan_theta = tan_theta;
  out.scale.unit.resize(instance.num_slots);
  for (int t = 0; t < instance.num_slots; ++t) {
    out.scale.unit[t] =
        epsilon * instance.capacities[t] / (static_cast<double>(n) * (tan_theta + 1.0));
  }

  for (const auto& u : instance.users) {
    bool negative_real = false;
    for (const auto& p : u.preferences) {
      for (const auto& v : p.values) negative_real = negative_real || v.re < 0.0;
    }
    dkp::GridUser gu;
    gu.user_id = u.id;
    for (const auto& p : u.preferences) {
      dkp::GridPref gp;
      gp.pref_id = p.id;
      gp.utility = p.utility;
      gp.real_units.assign(instance.num_slots, 0);
      gp.imag_units.assign(instance.num_slots, 0);
      for (std::size_t i = 0; i < p.window.size(); ++i) {
        const int t = p.window[i] - 1;
        const RoundedValue rv = round_value(p.values[i], out.scale.unit[t]);
        gp.real_units[t] = negative_real ? -rv.real_units : rv.real_units;
        gp.imag_units[t] = rv.imag_units;
      }
      gu.prefs.push_back(std::move(gp));
    }
    (negative_real ? out.minus_users : out.plus_users).push_back(std::move(gu));
  }
  return out;
}

GuessGrid make_guess_grid(const Instance& instance, const RoundedInstance& rounded,
                          double epsilon) {
  check_epsilon(epsilon);
  const double tan_theta = rounded.scale.tan_theta;
  const long long n_plus = static_cast<long long>(rounded.plus_users.size());
  const long long n_minus = static_cast<long long>(rounded.minus_users.size());

  GuessGrid grid;
  const int m = instance.num_slots;
  grid.xi_plus_max.assign(m, 0);
  grid.xi_minus_max.assign(m, 0);
  grid.zeta_plus_max.assign(m, 0);
  grid.zeta_minus_max.assign(m, 0);
  for (int t = 0; t < m; ++t) {
    const double cap = instance.capacities[t];
    const double unit = rounded.scale.unit[t];
    if (n_plus > 0) {
      grid.xi_plus_max[t] =
          static_cast<long long>(std::ceil(cap * (1.0 + tan_theta) / unit)) + n_plus;
      grid.zeta_plus_max[t] = static_cast<long long>(std::ceil(cap / unit)) + n_plus;
    }
    if (n_minus > 0) {
      grid.xi_minus_max[t] = static_cast<long long>(std::ceil(cap * tan_theta / unit)) + n_minus;
      grid.zeta_minus_max[t] = static_cast<long long>(std::ceil(cap / unit)) + n_minus;
    }
    grid.raw_tuple_count *= static_cast<double>(grid.xi_plus_max[t] + 1) *
                            static_cast<double>(grid.xi_minus_max[t] + 1) *
                            static_cast<double>(grid.zeta_plus_max[t] + 1) *
                            static_cast<double>(grid.zeta_minus_max[t] + 1);
  }
  return grid;
}

GuessEnumerator::GuessEnumerator(const Instance& instance, const RoundedInstance& rounded,
                                 const GuessGrid& grid, double epsilon) {
  slots_ = static_cast<std::size_t>(instance.num_slots);
  maxima_.reserve(4 * slots_);
  // Flattened digit order: xi_plus, xi_minus, zeta_plus, zeta_minus, each
  // slot-major. The odometer increments the last digit fastest, giving
  // ascending lexicographic order over the flattened tuple.
  for (std::size_t t = 0; t < slots_; ++t) maxima_.push_back(grid.xi_plus_max[t]);
  for (std::size_t t = 0; t < slots_; ++t) maxima_.push_back(grid.xi_minus_max[t]);
  for (std::size_t t = 0; t < slots_; ++t) maxima_.push_back(grid.zeta_plus_max[t]);
  for (std::size_t t = 0; t < slots_; ++t) maxima_.push_back(grid.zeta_minus_max[t]);
  coords_.assign(4 * slots_, 0);

  unit_ = rounded.scale.unit;
  cap_sq_.resize(slots_);
  for (std::size_t t = 0; t < slots_; ++t) {
    const double bound = (1.0 + 2.0 * epsilon) * instance.capacities[t];
    cap_sq_[t] = bound * bound;
  }
}

bool GuessEnumerator::admissible() const {
  for (std::size_t t = 0; t < slots_; ++t) {
    const double unit = unit_[t];
    const double xi = static_cast<double>(coords_[t] - coords_[slots_ + t]) * unit;
    const double zeta =
        static_cast<double>(coords_[2 * slots_ + t] + coords_[3 * slots_ + t]) * unit;
    if (xi * xi + zeta * zeta > cap_sq_[t] * (1.0 + 1e-12) + 1e-12) return false;
  }
  return true;
}

bool GuessEnumerator::advance() {
  for (std::size_t d = coords_.size(); d-- > 0;) {
    if (coords_[d] < maxima_[d]) {
      ++coords_[d];
      std::fill(coords_.begin() + static_cast<std::ptrdiff_t>(d) + 1, coords_.end(), 0);
      return true;
    }
  }
  return false;
}

std::optional<GuessVector> GuessEnumerator::next() {
  if (exhausted_) return std::nullopt;
  while (true) {
    if (first_) {
      first_ = false;
    } else if (!advance()) {
      exhausted_ = true;
      return std::nullopt;
    }
    if (admissible()) break;
  }
  GuessVector out;
  out.xi_plus.assign(coords_.begin(), coords_.begin() + slots_);
  out.xi_minus.assign(coords_.begin() + slots_, coords_.begin() + 2 * slots_);
  out.zeta_plus.assign(coords_.begin() + 2 * slots_, coords_.begin() + 3 * slots_);
  out.zeta_minus.assign(coords_.begin() + 3 * slots_, coords_.begin() + 4 * slots_);
  return out;
}

SolveResult solve_bifptas(const Instance& instance, const Config& config) {
  check_epsilon(config.epsilon);
  if (instance.num_slots > config.max_slots) {
    throw precondition_error("bi-criteria solve supports at most " +
                             std::to_string(config.max_slots) + " slots, instance has " +
                             std::to_string(instance.num_slots));
  }

  SolveResult result;
  result.report.solver_name = "fptas";
  if (instance.total_preferences() == 0) {
    result.report = evaluate(instance, result.solution);
    result.report.solver_name = "fptas";
    return result;
  }

  const RoundedInstance rounded = round_demands(instance, config.epsilon, config.angle_margin);
  const GuessGrid grid = make_guess_grid(instance, rounded, config.epsilon);

  // One exact-fit table per side answers every guess by lookup.
  const dkp::ExactFitTable plus_table(rounded.plus_users, grid.xi_plus_max, grid.zeta_plus_max,
                                      config.table_entry_cap);
  const dkp::ExactFitTable minus_table(rounded.minus_users, grid.xi_minus_max,
                                       grid.zeta_minus_max, config.table_entry_cap);

  // Guesses with an unreachable table entry contribute nothing, so it is
  // enough to pair the reachable states of the two tables. This visits the
  // same admissible guesses as the full grid product and keeps the same
  // lexicographic tie-break, at a fraction of the work.
  struct Reachable {
    std::vector<long long> real_coords;
    std::vector<long long> imag_coords;
    double utility;
  };
  std::vector<Reachable> plus_states, minus_states;
  plus_table.for_each_reachable([&](const auto& r, const auto& i, double u) {
    plus_states.push_back({r, i, u});
  });
  minus_table.for_each_reachable([&](const auto& r, const auto& i, double u) {
    minus_states.push_back({r, i, u});
  });
  const double pair_count = static_cast<double>(plus_states.size()) *
                            static_cast<double>(minus_states.size());
  if (pair_count > static_cast<double>(config.guess_cap)) {
    throw resource_error("guess space of " + std::to_string(pair_count) +
                         " reachable state pairs exceeds the cap of " +
                         std::to_string(config.guess_cap));
  }

  const int m = instance.num_slots;
  std::vector<double> cap_sq(m);
  for (int t = 0; t < m; ++t) {
    const double bound = (1.0 + 2.0 * config.epsilon) * instance.capacities[t];
    cap_sq[t] = bound * bound;
  }
  const auto admissible = [&](const Reachable& plus, const Reachable& minus) {
    for (int t = 0; t < m; ++t) {
      const double unit = rounded.scale.unit[t];
      const double xi =
          static_cast<double>(plus.real_coords[t] - minus.real_coords[t]) * unit;
      const double zeta =
          static_cast<double>(plus.imag_coords[t] + minus.imag_coords[t]) * unit;
      if (xi * xi + zeta * zeta > cap_sq[t] * (1.0 + 1e-12) + 1e-12) return false;
    }
    return true;
  };
  const auto flatten = [m](const Reachable& plus, const Reachable& minus) {
    GuessVector guess;
    guess.xi_plus = plus.real_coords;
    guess.xi_minus = minus.real_coords;
    guess.zeta_plus = plus.imag_coords;
    guess.zeta_minus = minus.imag_coords;
    std::vector<long long> flat;
    flat.reserve(4 * m);
    flat.insert(flat.end(), guess.xi_plus.begin(), guess.xi_plus.end());
    flat.insert(flat.end(), guess.xi_minus.begin(), guess.xi_minus.end());
    flat.insert(flat.end(), guess.zeta_plus.begin(), guess.zeta_plus.end());
    flat.insert(flat.end(), guess.zeta_minus.begin(), guess.zeta_minus.end());
    return std::make_pair(guess, flat);
  };

  bool have_best = false;
  double best_utility = -1.0;
  GuessVector best_guess;
  std::vector<long long> best_flat;

  for (const Reachable& plus : plus_states) {
    for (const Reachable& minus : minus_states) {
      const double utility = plus.utility + minus.utility;
      if (have_best && utility < best_utility) continue;
      if (!admissible(plus, minus)) continue;
      auto [guess, flat] = flatten(plus, minus);
      if (!have_best || utility > best_utility ||
          (utility == best_utility && flat < best_flat)) {
        have_best = true;
        best_utility = utility;
        best_guess = std::move(guess);
        best_flat = std::move(flat);
      }
    }
  }

  if (have_best) {
    Selection plus_sel = plus_table.reconstruct(best_guess.xi_plus, best_guess.zeta_plus);
    Selection minus_sel = minus_table.reconstruct(best_guess.xi_minus, best_guess.zeta_minus);
    result.solution.chosen.chosen = std::move(plus_sel.chosen);
    result.solution.chosen.chosen.insert(result.solution.chosen.chosen.end(),
                                         minus_sel.chosen.begin(), minus_sel.chosen.end());
    result.solution.sort_canonical();
  }
  result.report = evaluate(instance, result.solution);
  result.report.solver_name = "fptas";
  return result;
}

}  // namespace csched::fptas
