#include "csched/dkp.hpp"

#include <algorithm>
#include <limits>

#include "csched/errors.hpp"

namespace csched::dkp {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

}  // namespace

ExactFitTable::ExactFitTable(const std::vector<GridUser>& users,
                             std::vector<long long> real_bounds,
                             std::vector<long long> imag_bounds, long long entry_cap)
    : users_(users), real_bounds_(std::move(real_bounds)), imag_bounds_(std::move(imag_bounds)) {
  const std::size_t m = real_bounds_.size();
  if (imag_bounds_.size() != m) {
    throw precondition_error("ExactFitTable: bound vectors must have equal length");
  }
  for (const auto& u : users_) {
    if (u.prefs.size() > 32767) throw precondition_error("ExactFitTable: too many preferences");
    for (const auto& p : u.prefs) {
      if (p.real_units.size() != m || p.imag_units.size() != m) {
        throw precondition_error("ExactFitTable: preference coordinate length mismatch");
      }
      for (std::size_t t = 0; t < m; ++t) {
        if (p.real_units[t] < 0 || p.imag_units[t] < 0) {
          throw precondition_error("ExactFitTable: coordinates must be nonnegative");
        }
      }
    }
  }

  strides_.assign(2 * m, 0);
  long long count = 1;
  double approx = 1.0;
  for (std::size_t d = 0; d < 2 * m; ++d) {
    const long long extent = (d < m ? real_bounds_[d] : imag_bounds_[d - m]) + 1;
    strides_[d] = count;
    approx *= static_cast<double>(extent);
    if (approx > static_cast<double>(entry_cap)) {
      throw resource_error("ExactFitTable: state space of about " + std::to_string(approx) +
                           " states exceeds the cap of " + std::to_string(entry_cap));
    }
    count *= extent;
  }
  state_count_ = count;

  const double total_entries =
      static_cast<double>(state_count_) * static_cast<double>(std::max<std::size_t>(users_.size(), 1));
  // Entries cap plus an explicit byte estimate: three value arrays of doubles
  // and one back-pointer layer per user.
  const double approx_bytes = static_cast<double>(state_count_) * 24.0 + total_entries * 2.0;
  if (total_entries > static_cast<double>(entry_cap) ||
      approx_bytes > 10.0 * static_cast<double>(entry_cap)) {
    throw resource_error("ExactFitTable: table would need " + std::to_string(total_entries) +
                         " entries (~" + std::to_string(approx_bytes / 1048576.0) +
                         " MiB), above the cap of " + std::to_string(entry_cap));
  }

  // Offsets of a preference inside the flattened state space, valid only when
  // the per-coordinate bound checks pass.
  std::vector<std::vector<long long>> offsets(users_.size());
  for (std::size_t k = 0; k < users_.size(); ++k) {
    for (const auto& p : users_[k].prefs) {
      long long off = 0;
      bool in_range = true;
      for (std::size_t t = 0; t < m; ++t) {
        if (p.real_units[t] > real_bounds_[t] || p.imag_units[t] > imag_bounds_[t]) {
          in_range = false;
          break;
        }
        off += p.real_units[t] * strides_[t] + p.imag_units[t] * strides_[m + t];
      }
      offsets[k].push_back(in_range ? off : -1);
    }
  }

  std::vector<double> prev(state_count_, kMinusInf);
  prev[0] = 0.0;
  value_ = prev;
  choice_.assign(static_cast<std::size_t>(state_count_) * users_.size(), 0);

  std::vector<long long> coords(2 * m, 0);
  for (std::size_t k = 0; k < users_.size(); ++k) {
    std::vector<double> cur = prev;  // skip is the default
    std::int16_t* layer = choice_.data() + static_cast<std::size_t>(k) * state_count_;
    std::fill(coords.begin(), coords.end(), 0);
    for (long long idx = 0; idx < state_count_; ++idx) {
      const double base = prev[idx];
      if (base != kMinusInf) {
        for (std::size_t j = 0; j < users_[k].prefs.size(); ++j) {
          if (offsets[k][j] < 0) continue;
          const GridPref& p = users_[k].prefs[j];
          bool fits = true;
          for (std::size_t t = 0; t < m && fits; ++t) {
            fits = coords[t] + p.real_units[t] <= real_bounds_[t] &&
                   coords[m + t] + p.imag_units[t] <= imag_bounds_[t];
          }
          if (!fits) continue;
          const long long dest = idx + offsets[k][j];
          const double cand = base + p.utility;
          if (cand > cur[dest]) {
            cur[dest] = cand;
            layer[dest] = static_cast<std::int16_t>(j + 1);
          }
        }
      }
      // odometer over coordinates
      for (std::size_t d = 0; d < 2 * m; ++d) {
        const long long extent = (d < m ? real_bounds_[d] : imag_bounds_[d - m]);
        if (coords[d] < extent) {
          ++coords[d];
          break;
        }
        coords[d] = 0;
      }
    }
    prev.swap(cur);
  }
  value_ = std::move(prev);
}

long long ExactFitTable::state_index(const std::vector<long long>& real_target,
                                     const std::vector<long long>& imag_target) const {
  const std::size_t m = real_bounds_.size();
  if (real_target.size() != m || imag_target.size() != m) {
    throw precondition_error("ExactFitTable: target length mismatch");
  }
  long long idx = 0;
  for (std::size_t t = 0; t < m; ++t) {
    if (real_target[t] < 0 || real_target[t] > real_bounds_[t] || imag_target[t] < 0 ||
        imag_target[t] > imag_bounds_[t]) {
      return -1;
    }
    idx += real_target[t] * strides_[t] + imag_target[t] * strides_[m + t];
  }
  return idx;
}

std::optional<double> ExactFitTable::best_utility(const std::vector<long long>& real_target,
                                                  const std::vector<long long>& imag_target) const {
  const long long idx = state_index(real_target, imag_target);
  if (idx < 0 || value_[idx] == kMinusInf) return std::nullopt;
  return value_[idx];
}

Selection ExactFitTable::reconstruct(const std::vector<long long>& real_target,
                                     const std::vector<long long>& imag_target) const {
  long long idx = state_index(real_target, imag_target);
  if (idx < 0 || value_[idx] == kMinusInf) {
    throw precondition_error("ExactFitTable: reconstruct on an unreachable target");
  }
  const std::size_t m = real_bounds_.size();
  Selection out;
  for (std::size_t k = users_.size(); k-- > 0;) {
    const std::int16_t pick = choice_[static_cast<std::size_t>(k) * state_count_ + idx];
    if (pick == 0) continue;
    const GridPref& p = users_[k].prefs[static_cast<std::size_t>(pick - 1)];
    out.chosen.emplace_back(users_[k].user_id, p.pref_id);
    long long off = 0;
    for (std::size_t t = 0; t < m; ++t) {
      off += p.real_units[t] * strides_[t] + p.imag_units[t] * strides_[m + t];
    }
    idx -= off;
  }
  out.sort_canonical();
  return out;
}

void ExactFitTable::for_each_reachable(
    const std::function<void(const std::vector<long long>&, const std::vector<long long>&,
                             double)>& fn) const {
  const std::size_t m = real_bounds_.size();
  std::vector<long long> coords(2 * m, 0);
  std::vector<long long> real_coords(m), imag_coords(m);
  for (long long idx = 0; idx < state_count_; ++idx) {
    if (value_[idx] != kMinusInf) {
      for (std::size_t t = 0; t < m; ++t) {
        real_coords[t] = coords[t];
        imag_coords[t] = coords[m + t];
      }
      fn(real_coords, imag_coords, value_[idx]);
    }
    for (std::size_t d = 0; d < 2 * m; ++d) {
      const long long extent = (d < m ? real_bounds_[d] : imag_bounds_[d - m]);
      if (coords[d] < extent) {
        ++coords[d];
        break;
      }
      coords[d] = 0;
    }
  }
}

std::optional<std::pair<Selection, double>> dkp_exact(const std::vector<GridUser>& users,
                                                      const std::vector<long long>& c1,
                                                      const std::vector<long long>& c2,
                                                      long long entry_cap) {
  for (std::size_t t = 0; t < c1.size(); ++t) {
    if (c1[t] < 0 || (t < c2.size() && c2[t] < 0)) {
      throw precondition_error("dkp_exact: targets must be nonnegative");
    }
  }
  const ExactFitTable table(users, c1, c2, entry_cap);
  const auto best = table.best_utility(c1, c2);
  if (!best) return std::nullopt;
  return std::make_pair(table.reconstruct(c1, c2), *best);
}

}  // namespace csched::dkp
