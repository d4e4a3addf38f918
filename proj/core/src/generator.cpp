#include "csched/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "csched/errors.hpp"

namespace csched::gen {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;

// Distribution helpers on top of the raw engine keep outputs independent of
// standard-library distribution implementations.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }
  bool bernoulli(double p) { return uniform() < p; }
};

std::string padded(const char* prefix, int value) {
  std::string digits = std::to_string(value);
  while (digits.size() < 3) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

}  // namespace

Instance generate(const GeneratorConfig& config) {
  if (config.num_users < 0 || config.num_slots < 1 || config.max_prefs_per_user < 1) {
    throw precondition_error("generator: users >= 0, slots >= 1, prefs per user >= 1 required");
  }
  if (!(config.magnitude_lo > 0.0) || config.magnitude_hi < config.magnitude_lo) {
    throw precondition_error("generator: magnitude range must satisfy 0 < lo <= hi");
  }
  if (config.angle_max < 0.0 || config.angle_max >= kPi) {
    throw precondition_error("generator: angle_max must lie in [0, pi)");
  }
  if (config.elastic_fraction < 0.0 || config.elastic_fraction > 1.0) {
    throw precondition_error("generator: elastic_fraction must lie in [0, 1]");
  }

  Rng rng(config.seed);
  Instance ins;
  ins.num_slots = config.num_slots;
  ins.capacities.resize(config.num_slots);
  for (int t = 0; t < config.num_slots; ++t) {
    switch (config.capacity_profile) {
      case CapacityProfile::Constant:
        ins.capacities[t] = 10.0;
        break;
      case CapacityProfile::Random:
        ins.capacities[t] = rng.uniform(6.0, 14.0);
        break;
      case CapacityProfile::Valley:
        ins.capacities[t] =
            10.0 - 6.0 * std::sin(kPi * (static_cast<double>(t) + 0.5) / config.num_slots);
        break;
    }
  }

  for (int k = 1; k <= config.num_users; ++k) {
    User user;
    user.id = padded("u", k);
    // All of a user's demands share an active-power sign; users land in the
    // second quadrant only when angle_max allows it.
    const bool second_quadrant = config.angle_max > kHalfPi + 0.03 && rng.bernoulli(0.35);
    const int num_prefs = rng.uniform_int(1, config.max_prefs_per_user);
    for (int j = 1; j <= num_prefs; ++j) {
      DemandPreference pref;
      pref.id = padded("p", j);
      int lo = 1, hi = config.num_slots;
      if (config.window_model == WindowModel::RandomContiguous) {
        lo = rng.uniform_int(1, config.num_slots);
        hi = rng.uniform_int(lo, config.num_slots);
      }
      for (int t = lo; t <= hi; ++t) pref.window.push_back(t);

      double min_cap = ins.capacities[lo - 1];
      for (int t = lo; t <= hi; ++t) min_cap = std::min(min_cap, ins.capacities[t - 1]);
      const double magnitude =
          std::min(rng.uniform(config.magnitude_lo, config.magnitude_hi), 0.95 * min_cap);
      const double angle = second_quadrant
                               ? rng.uniform(kHalfPi + 0.02, config.angle_max)
                               : rng.uniform(0.0, std::min(config.angle_max, kHalfPi));
      const ComplexPower value{magnitude * std::cos(angle), magnitude * std::sin(angle)};
      pref.values.assign(pref.window.size(), value);

      pref.utility = config.utility_model == UtilityModel::ProportionalToMagnitude
                         ? magnitude * rng.uniform(0.8, 1.25)
                         : rng.uniform(1.0, 10.0);
      pref.elasticity =
          rng.bernoulli(config.elastic_fraction) ? Elasticity::Elastic : Elasticity::Inelastic;
      user.preferences.push_back(std::move(pref));
    }
    ins.users.push_back(std::move(user));
  }
  return ins;
}

CapacityProfile capacity_profile_from_string(const std::string& name) {
  if (name == "constant") return CapacityProfile::Constant;
  if (name == "random") return CapacityProfile::Random;
  if (name == "valley") return CapacityProfile::Valley;
  throw precondition_error("unknown capacity profile '" + name + "'");
}

UtilityModel utility_model_from_string(const std::string& name) {
  if (name == "proportional") return UtilityModel::ProportionalToMagnitude;
  if (name == "uniform") return UtilityModel::Uniform;
  throw precondition_error("unknown utility model '" + name + "'");
}

WindowModel window_model_from_string(const std::string& name) {
  if (name == "full") return WindowModel::Full;
  if (name == "random-contiguous") return WindowModel::RandomContiguous;
  throw precondition_error("unknown window model '" + name + "'");
}

}  // namespace csched::gen
