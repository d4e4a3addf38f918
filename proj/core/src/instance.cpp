#include "csched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csched/errors.hpp"
#include "csched/solution.hpp"

namespace csched {

bool DemandPreference::contiguous_window() const {
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i] != window[i - 1] + 1) return false;
  }
  return true;
}

const ComplexPower* DemandPreference::value_at(int slot) const {
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (window[i] == slot) return &values[i];
  }
  return nullptr;
}

const User* Instance::find_user(const std::string& user_id) const {
  for (const auto& u : users) {
    if (u.id == user_id) return &u;
  }
  return nullptr;
}

const DemandPreference* Instance::find_preference(const std::string& user_id,
                                                  const std::string& pref_id) const {
  const User* u = find_user(user_id);
  if (u == nullptr) return nullptr;
  for (const auto& p : u->preferences) {
    if (p.id == pref_id) return &p;
  }
  return nullptr;
}

std::size_t Instance::total_preferences() const {
  std::size_t n = 0;
  for (const auto& u : users) n += u.preferences.size();
  return n;
}

namespace {

std::string where(const User& u, const DemandPreference& p) {
  return "user '" + u.id + "' pref '" + p.id + "'";
}

// Argument lies in [0, pi): upper half-plane, negative real axis excluded.
bool in_upper_half_plane(const ComplexPower& v) {
  if (v.im < 0.0) return false;
  if (v.im == 0.0 && v.re < 0.0) return false;
  return true;
}

}  // namespace

std::vector<std::string> validate(const Instance& instance) {
  std::vector<std::string> out;
  std::ostringstream msg;
  auto emit = [&out, &msg]() {
    out.push_back(msg.str());
    msg.str("");
  };

  if (instance.num_slots <= 0) {
    msg << "num_slots must be positive, got " << instance.num_slots;
    emit();
  }
  if (static_cast<int>(instance.capacities.size()) != instance.num_slots) {
    msg << "capacities has " << instance.capacities.size() << " entries, expected "
        << instance.num_slots;
    emit();
  }
  for (std::size_t t = 0; t < instance.capacities.size(); ++t) {
    if (!(instance.capacities[t] > 0.0) || !std::isfinite(instance.capacities[t])) {
      msg << "capacity of slot " << (t + 1) << " must be a positive finite number";
      emit();
    }
  }

  for (const auto& u : instance.users) {
    if (u.preferences.empty()) {
      msg << "user '" << u.id << "' has no preferences";
      emit();
    }
    bool any_nonneg_re = false;
    bool any_neg_re = false;
    for (const auto& p : u.preferences) {
      if (p.window.empty()) {
        msg << where(u, p) << ": empty window";
        emit();
      }
      if (p.values.size() != p.window.size()) {
        msg << where(u, p) << ": " << p.values.size() << " values for a window of "
            << p.window.size() << " slots";
        emit();
        continue;
      }
      if (!std::is_sorted(p.window.begin(), p.window.end()) ||
          std::adjacent_find(p.window.begin(), p.window.end()) != p.window.end()) {
        msg << where(u, p) << ": window slots must be strictly increasing";
        emit();
      }
      if (!(p.utility > 0.0) || !std::isfinite(p.utility)) {
        msg << where(u, p) << ": utility must be positive, got " << p.utility;
        emit();
      }
      for (std::size_t i = 0; i < p.window.size(); ++i) {
        const int slot = p.window[i];
        const ComplexPower& v = p.values[i];
        if (slot < 1 || slot > instance.num_slots) {
          msg << where(u, p) << ": bad slot index " << slot;
          emit();
          continue;
        }
        if (!std::isfinite(v.re) || !std::isfinite(v.im)) {
          msg << where(u, p) << ": non-finite value at slot " << slot;
          emit();
          continue;
        }
        if (!in_upper_half_plane(v)) {
          msg << where(u, p) << ": value at slot " << slot
              << " lies outside the upper half-plane (argument must be in [0, pi))";
          emit();
        }
        const double cap = instance.capacities[slot - 1];
        if (v.magnitude() > cap * (1.0 + kFeasibilityTol)) {
          msg << where(u, p) << ": |s|=" << v.magnitude() << " > C_t=" << cap << " at slot "
              << slot;
          emit();
        }
        (v.re >= 0.0 ? any_nonneg_re : any_neg_re) = true;
      }
    }
    if (any_nonneg_re && any_neg_re) {
      msg << "user '" << u.id
          << "': quadrant mixing, demands must all have active power >= 0 or all < 0";
      emit();
    }
  }
  return out;
}

AngleStats angle_stats(const Instance& instance) {
  AngleStats stats;
  for (const auto& u : instance.users) {
    for (const auto& p : u.preferences) {
      for (const auto& v : p.values) {
        if (v.magnitude() > 0.0) stats.phi = std::max(stats.phi, v.argument());
      }
    }
  }
  constexpr double kHalfPi = 1.5707963267948966;
  stats.theta = std::max(stats.phi - kHalfPi, 0.0);
  return stats;
}

Instance rotated(const Instance& instance, double rho) {
  Instance out = instance;
  for (auto& u : out.users) {
    for (auto& p : u.preferences) {
      for (auto& v : p.values) v = rotated(v, rho);
    }
  }
  return out;
}

Instance normalize_rotation(const Instance& instance) {
  bool any = false;
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& u : instance.users) {
    for (const auto& p : u.preferences) {
      for (const auto& v : p.values) {
        if (v.magnitude() == 0.0) continue;
        const double a = v.argument();
        if (!any) {
          lo = hi = a;
          any = true;
        } else {
          lo = std::min(lo, a);
          hi = std::max(hi, a);
        }
      }
    }
  }
  if (!any) return instance;
  constexpr double kPi = 3.141592653589793;
  if (hi - lo >= kPi) {
    throw precondition_error("normalize_rotation: demand arguments span at least pi");
  }
  Instance out = rotated(instance, -lo);
  // Rotation leaves components of size ~1e-16 where an axis alignment was
  // exact; snap them so the result passes the half-plane validation.
  for (auto& u : out.users) {
    for (auto& p : u.preferences) {
      for (auto& v : p.values) {
        const double snap = 1e-12 * v.magnitude();
        if (std::abs(v.re) <= snap) v.re = 0.0;
        if (std::abs(v.im) <= snap) v.im = 0.0;
      }
    }
  }
  return out;
}

}  // namespace csched
