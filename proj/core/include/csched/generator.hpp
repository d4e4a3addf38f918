#pragma once

#include <cstdint>
#include <string>

#include "csched/instance.hpp"

namespace csched::gen {

enum class CapacityProfile { Constant, Random, Valley };
enum class UtilityModel { ProportionalToMagnitude, Uniform };
enum class WindowModel { Full, RandomContiguous };

// Random-instance recipe. Generated instances always validate cleanly and
// demands are constant over their windows. A fixed seed yields byte-identical
// serialized output across runs.
struct GeneratorConfig {
  std::uint64_t seed = 1;
  int num_users = 4;
  int max_prefs_per_user = 2;
  int num_slots = 1;
  double angle_max = 1.5707963267948966;  // pi/2
  CapacityProfile capacity_profile = CapacityProfile::Constant;
  double magnitude_lo = 0.5;
  double magnitude_hi = 8.0;
  UtilityModel utility_model = UtilityModel::ProportionalToMagnitude;
  double elastic_fraction = 0.0;
  WindowModel window_model = WindowModel::Full;
};

Instance generate(const GeneratorConfig& config);

CapacityProfile capacity_profile_from_string(const std::string& name);
UtilityModel utility_model_from_string(const std::string& name);
WindowModel window_model_from_string(const std::string& name);

}  // namespace csched::gen
