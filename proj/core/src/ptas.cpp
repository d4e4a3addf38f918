#include "csched/ptas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "csched/errors.hpp"

namespace csched::ptas {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// Instance flattened to an indexed item list, ordered by (user_id, pref_id)
// so set enumeration and tie-breaking are deterministic.
struct DenseModel {
  const Instance* instance = nullptr;
  struct Item {
    const std::string* user_id;
    const std::string* pref_id;
    int user = 0;
    double utility = 0.0;
    bool elastic = false;
  };
  std::vector<Item> items;
  std::vector<std::vector<double>> real_part;  // [item][slot], zero off-window
  std::vector<std::vector<double>> imag_part;
  int num_users = 0;

  explicit DenseModel(const Instance& ins) : instance(&ins) {
    std::vector<const User*> users;
    for (const auto& u : ins.users) users.push_back(&u);
    std::sort(users.begin(), users.end(),
              [](const User* a, const User* b) { return a->id < b->id; });
    num_users = static_cast<int>(users.size());
    for (int k = 0; k < num_users; ++k) {
      std::vector<const DemandPreference*> prefs;
      for (const auto& p : users[k]->preferences) prefs.push_back(&p);
      std::sort(prefs.begin(), prefs.end(),
                [](const DemandPreference* a, const DemandPreference* b) { return a->id < b->id; });
      for (const auto* p : prefs) {
        Item item;
        item.user_id = &users[k]->id;
        item.pref_id = &p->id;
        item.user = k;
        item.utility = p->utility;
        item.elastic = p->elastic();
        items.push_back(item);
        std::vector<double> re(ins.num_slots, 0.0), im(ins.num_slots, 0.0);
        for (std::size_t i = 0; i < p->window.size(); ++i) {
          re[p->window[i] - 1] = p->values[i].re;
          im[p->window[i] - 1] = p->values[i].im;
        }
        real_part.push_back(std::move(re));
        imag_part.push_back(std::move(im));
      }
    }
  }

  int index_of(const std::string& user_id, const std::string& pref_id) const {
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (*items[j].user_id == user_id && *items[j].pref_id == pref_id) {
        return static_cast<int>(j);
      }
    }
    throw precondition_error("unknown demand '" + user_id + "'/'" + pref_id + "'");
  }

  void loads(const std::vector<double>& x, std::vector<double>& r, std::vector<double>& i) const {
    const int m = instance->num_slots;
    r.assign(m, 0.0);
    i.assign(m, 0.0);
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (x[j] == 0.0) continue;
      for (int t = 0; t < m; ++t) {
        r[t] += x[j] * real_part[j][t];
        i[t] += x[j] * imag_part[j][t];
      }
    }
  }

  double objective(const std::vector<double>& x) const {
    double u = 0.0;
    for (std::size_t j = 0; j < items.size(); ++j) u += x[j] * items[j].utility;
    return u;
  }
};

constexpr double kFree = std::numeric_limits<double>::quiet_NaN();

bool is_fixed(double v) { return !std::isnan(v); }

// Penalized conditional-gradient solver for the relaxed problem on the
// simplex-product polytope. Quadratic slot constraints enter the objective as
// a squared-hinge penalty; the returned point is made hard-feasible by
// scaling the free part, which keeps the fixed part intact.
struct PenalizedGradientSolver {
  const DenseModel& model;
  std::vector<double> fixed;        // per item: 0, 1, or kFree
  std::vector<double> user_budget;  // per user: 1 - (fixed ones)
  double delta;
  int max_iterations;

  std::vector<double> fixed_real, fixed_imag;  // loads of the fixed-at-1 part

  PenalizedGradientSolver(const DenseModel& m, std::vector<double> fixed_values, double d, int iters)
      : model(m), fixed(std::move(fixed_values)), delta(d), max_iterations(iters) {
    user_budget.assign(model.num_users, 1.0);
    std::vector<double> ones(model.items.size(), 0.0);
    for (std::size_t j = 0; j < model.items.size(); ++j) {
      if (is_fixed(fixed[j])) {
        user_budget[model.items[j].user] -= fixed[j];
        ones[j] = fixed[j];
      }
    }
    model.loads(ones, fixed_real, fixed_imag);
    for (int t = 0; t < model.instance->num_slots; ++t) {
      const double cap = model.instance->capacities[t];
      if (std::hypot(fixed_real[t], fixed_imag[t]) > cap * (1.0 + kFeasibilityTol)) {
        throw precondition_error("relaxation: the pinned demand set already exceeds capacity");
      }
    }
  }

  double penalty_term(double r, double i, double cap) const {
    const double g = (r * r + i * i) / (cap * cap) - 1.0;
    return g > 0.0 ? g * g : 0.0;
  }

  double penalized_objective(const std::vector<double>& x, double rho,
                             const std::vector<double>& r, const std::vector<double>& i) const {
    double f = model.objective(x);
    for (int t = 0; t < model.instance->num_slots; ++t) {
      f -= rho * penalty_term(r[t], i[t], model.instance->capacities[t]);
    }
    return f;
  }

  void gradient(const std::vector<double>& r, const std::vector<double>& i, double rho,
                std::vector<double>& grad) const {
    const int m = model.instance->num_slots;
    std::vector<double> coef_r(m, 0.0), coef_i(m, 0.0);
    for (int t = 0; t < m; ++t) {
      const double cap = model.instance->capacities[t];
      const double g = (r[t] * r[t] + i[t] * i[t]) / (cap * cap) - 1.0;
      if (g > 0.0) {
        coef_r[t] = rho * 4.0 * g * r[t] / (cap * cap);
        coef_i[t] = rho * 4.0 * g * i[t] / (cap * cap);
      }
    }
    grad.assign(model.items.size(), 0.0);
    for (std::size_t j = 0; j < model.items.size(); ++j) {
      grad[j] = model.items[j].utility;
      for (int t = 0; t < m; ++t) {
        grad[j] -= coef_r[t] * model.real_part[j][t] + coef_i[t] * model.imag_part[j][t];
      }
    }
  }

  // Linear maximization over the polytope: per user one best positive-gain
  // free item, fixed coordinates pinned.
  std::vector<double> lmo(const std::vector<double>& grad) const {
    std::vector<double> v(model.items.size(), 0.0);
    std::vector<int> best(model.num_users, -1);
    for (std::size_t j = 0; j < model.items.size(); ++j) {
      if (is_fixed(fixed[j])) {
        v[j] = fixed[j];
        continue;
      }
      const int k = model.items[j].user;
      if (user_budget[k] <= 0.0 || grad[j] <= 0.0) continue;
      if (best[k] < 0 || grad[j] > grad[best[k]]) best[k] = static_cast<int>(j);
    }
    for (int k = 0; k < model.num_users; ++k) {
      if (best[k] >= 0) v[best[k]] = 1.0;
    }
    return v;
  }

  // Largest gamma in [0, 1] such that the fixed loads plus gamma times the
  // free loads fit every slot.
  double restore_scale(const std::vector<double>& r, const std::vector<double>& i) const {
    auto fits = [&](double gamma) {
      for (int t = 0; t < model.instance->num_slots; ++t) {
        const double rr = fixed_real[t] + gamma * (r[t] - fixed_real[t]);
        const double ii = fixed_imag[t] + gamma * (i[t] - fixed_imag[t]);
        const double cap = model.instance->capacities[t];
        if (rr * rr + ii * ii > cap * cap) return false;
      }
      return true;
    };
    if (fits(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fits(mid) ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> restored(const std::vector<double>& x, double gamma) const {
    std::vector<double> out = x;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (!is_fixed(fixed[j])) out[j] *= gamma;
    }
    return out;
  }

  std::vector<double> solve() {
    const std::size_t n_items = model.items.size();
    std::vector<double> x(n_items, 0.0);
    for (std::size_t j = 0; j < n_items; ++j) x[j] = is_fixed(fixed[j]) ? fixed[j] : 0.0;

    double utility_scale = 1e-12;
    for (const auto& item : model.items) utility_scale = std::max(utility_scale, item.utility);
    double rho = 4.0 * utility_scale * static_cast<double>(std::max(model.num_users, 1));

    std::vector<double> r, i, grad, vr, vi;
    model.loads(x, r, i);

    std::vector<double> best = x;  // hard-feasible, best utility seen
    double best_utility = model.objective(x);

    for (int iter = 0; iter < max_iterations; ++iter) {
      gradient(r, i, rho, grad);
      const std::vector<double> v = lmo(grad);
      double gap = 0.0;
      for (std::size_t j = 0; j < n_items; ++j) gap += grad[j] * (v[j] - x[j]);

      // Certificate: any relaxation-feasible point scores at most f + gap.
      const double upper = penalized_objective(x, rho, r, i) + std::max(gap, 0.0);
      const double gamma_feas = restore_scale(r, i);
      const std::vector<double> candidate = restored(x, gamma_feas);
      const double cand_utility = model.objective(candidate);
      if (cand_utility > best_utility) {
        best_utility = cand_utility;
        best = candidate;
      }
      if (best_utility >= upper - delta) break;

      if (gap <= delta * 0.125) {
        // Converged for this penalty weight but the restored point is still
        // short of the certificate: tighten the penalty and continue.
        rho *= 8.0;
        model.loads(x, r, i);
        continue;
      }

      // Concave line search along [x, v] by derivative bisection.
      model.loads(v, vr, vi);
      const double u_x = model.objective(x);
      const double u_v = model.objective(v);
      auto derivative = [&](double gamma) {
        double d = u_v - u_x;
        for (int t = 0; t < model.instance->num_slots; ++t) {
          const double cap = model.instance->capacities[t];
          const double rr = r[t] + gamma * (vr[t] - r[t]);
          const double ii = i[t] + gamma * (vi[t] - i[t]);
          const double g = (rr * rr + ii * ii) / (cap * cap) - 1.0;
          if (g > 0.0) {
            d -= rho * 4.0 * g * (rr * (vr[t] - r[t]) + ii * (vi[t] - i[t])) / (cap * cap);
          }
        }
        return d;
      };
      double step = 1.0;
      if (derivative(1.0) < 0.0) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 48; ++it) {
          const double mid = 0.5 * (lo + hi);
          (derivative(mid) > 0.0 ? lo : hi) = mid;
        }
        step = 0.5 * (lo + hi);
      }
      if (step <= 0.0) continue;
      for (std::size_t j = 0; j < n_items; ++j) x[j] += step * (v[j] - x[j]);
      for (int t = 0; t < model.instance->num_slots; ++t) {
        r[t] += step * (vr[t] - r[t]);
        i[t] += step * (vi[t] - i[t]);
      }
    }
    return best;
  }
};

std::vector<double> fixed_values_for(const DenseModel& model, const Selection& s1,
                                     const Selection& s0) {
  std::vector<double> fixed(model.items.size(), kFree);
  for (const auto& [u, p] : s1.chosen) fixed[model.index_of(u, p)] = 1.0;
  for (const auto& [u, p] : s0.chosen) {
    const int j = model.index_of(u, p);
    if (fixed[j] == 1.0) throw precondition_error("s1 and s0 overlap on '" + u + "'/'" + p + "'");
    fixed[j] = 0.0;
  }
  // A user with a preference pinned to one cannot take anything else.
  std::vector<bool> pinned(model.num_users, false);
  for (std::size_t j = 0; j < model.items.size(); ++j) {
    if (fixed[j] == 1.0) pinned[model.items[j].user] = true;
  }
  for (std::size_t j = 0; j < model.items.size(); ++j) {
    if (!is_fixed(fixed[j]) && pinned[model.items[j].user]) fixed[j] = 0.0;
  }
  return fixed;
}

FractionalSolution to_fractional(const DenseModel& model, const std::vector<double>& x) {
  FractionalSolution out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] > 1e-12) {
      out.entries.push_back({*model.items[j].user_id, *model.items[j].pref_id, x[j]});
    }
  }
  out.sort_canonical();
  return out;
}

std::vector<double> to_dense(const DenseModel& model, const FractionalSolution& x) {
  std::vector<double> out(model.items.size(), 0.0);
  for (const auto& e : x.entries) out[model.index_of(e.user_id, e.pref_id)] = e.value;
  return out;
}

// First nonzero kernel vector of the rows x cols matrix, or empty if the
// kernel is trivial. Gaussian elimination with partial pivoting.
std::vector<double> kernel_vector(std::vector<std::vector<double>> a, std::size_t cols) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  double scale = 1e-30;
  for (const auto& r : a) {
    for (double v : r) scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-11 * scale;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < rows; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    }
    if (std::abs(a[best][col]) <= tol) continue;
    std::swap(a[row], a[best]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[row][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::set<std::size_t> pivots(pivot_col.begin(), pivot_col.end());
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!pivots.contains(c)) {
      free_col = c;
      break;
    }
  }
  if (free_col == cols) return {};
  std::vector<double> d(cols, 0.0);
  d[free_col] = 1.0;
  for (std::size_t r = pivot_col.size(); r-- > 0;) {
    const std::size_t pc = pivot_col[r];
    double s = 0.0;
    for (std::size_t c = pc + 1; c < cols; ++c) s += a[r][c] * d[c];
    d[pc] = -s / a[r][pc];
  }
  return d;
}

struct PurifyOutcome {
  std::vector<double> x;
  int fractional_free = 0;
};

PurifyOutcome purify_dense(const DenseModel& model, const ProjectionBudget& budget,
                           std::vector<double> x, const std::vector<double>& fixed) {
  const int m = model.instance->num_slots;
  const std::size_t n_items = model.items.size();
  const std::size_t n_rows = 2 * static_cast<std::size_t>(m) + model.num_users;

  auto row_coef = [&](std::size_t r, std::size_t j) -> double {
    if (r < static_cast<std::size_t>(m)) return model.real_part[j][r];
    if (r < static_cast<std::size_t>(2 * m)) return model.imag_part[j][r - m];
    return model.items[j].user == static_cast<int>(r - 2 * m) ? 1.0 : 0.0;
  };
  auto row_rhs = [&](std::size_t r) -> double {
    if (r < static_cast<std::size_t>(m)) return budget.real_load[r];
    if (r < static_cast<std::size_t>(2 * m)) return budget.imag_load[r - m];
    return 1.0;
  };

  const std::size_t max_iterations = 4 * (n_rows + n_items) + 16;
  for (std::size_t iteration = 0;; ++iteration) {
    if (iteration > max_iterations) {
      throw std::logic_error("purify_to_bfs: failed to reach a vertex");
    }

    std::vector<std::size_t> frac;
    for (std::size_t j = 0; j < n_items; ++j) {
      if (!is_fixed(fixed[j]) && x[j] > 1e-9 && x[j] < 1.0 - 1e-9) frac.push_back(j);
    }
    if (frac.empty()) break;

    std::vector<double> row_value(n_rows, 0.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_items; ++j) {
        if (x[j] != 0.0) s += row_coef(r, j) * x[j];
      }
      row_value[r] = s;
    }

    std::vector<std::size_t> tight;
    std::vector<std::size_t> slack_rows;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double tol = 1e-9 * std::max(1.0, std::abs(row_rhs(r)));
      (row_rhs(r) - row_value[r] <= tol ? tight : slack_rows).push_back(r);
    }

    std::vector<std::vector<double>> a;
    for (std::size_t r : tight) {
      std::vector<double> row(frac.size());
      for (std::size_t c = 0; c < frac.size(); ++c) row[c] = row_coef(r, frac[c]);
      a.push_back(std::move(row));
    }
    std::vector<double> d = kernel_vector(std::move(a), frac.size());
    if (d.empty()) break;  // vertex reached

    double norm = 0.0;
    for (double v : d) norm = std::max(norm, std::abs(v));
    for (double& v : d) v /= norm;

    double gain = 0.0;
    for (std::size_t c = 0; c < frac.size(); ++c) gain += model.items[frac[c]].utility * d[c];
    if (gain < 0.0) {
      for (double& v : d) v = -v;
    }

    double step = std::numeric_limits<double>::infinity();
    for (std::size_t r : slack_rows) {
      double v = 0.0;
      for (std::size_t c = 0; c < frac.size(); ++c) v += row_coef(r, frac[c]) * d[c];
      if (v > 1e-12) step = std::min(step, (row_rhs(r) - row_value[r]) / v);
    }
    for (std::size_t c = 0; c < frac.size(); ++c) {
      if (d[c] > 1e-12) step = std::min(step, (1.0 - x[frac[c]]) / d[c]);
      if (d[c] < -1e-12) step = std::min(step, x[frac[c]] / -d[c]);
    }
    if (!std::isfinite(step)) {
      throw std::logic_error("purify_to_bfs: unbounded direction in a box-bounded program");
    }
    for (std::size_t c = 0; c < frac.size(); ++c) {
      x[frac[c]] = std::clamp(x[frac[c]] + step * d[c], 0.0, 1.0);
    }
  }

  PurifyOutcome out;
  out.x = std::move(x);
  for (std::size_t j = 0; j < n_items; ++j) {
    if (!is_fixed(fixed[j]) && out.x[j] > 1e-9 && out.x[j] < 1.0 - 1e-9) ++out.fractional_free;
  }
  return out;
}

}  // namespace

FractionalSolution solve_relaxation(const Instance& instance, const Selection& s1,
                                    const Selection& s0, double delta, int max_iterations) {
  const DenseModel model(instance);
  PenalizedGradientSolver solver(model, fixed_values_for(model, s1, s0), delta, max_iterations);
  return to_fractional(model, solver.solve());
}

ProjectionBudget projection_budget(const Instance& instance, const FractionalSolution& x) {
  const DenseModel model(instance);
  ProjectionBudget budget;
  model.loads(to_dense(model, x), budget.real_load, budget.imag_load);
  return budget;
}

FractionalSolution purify_to_bfs(const Instance& instance, const ProjectionBudget& budget,
                                 const FractionalSolution& x_start,
                                 const std::vector<std::pair<std::string, std::string>>& fixed) {
  const DenseModel model(instance);
  const std::vector<double> x = to_dense(model, x_start);
  std::vector<double> fixed_values(model.items.size(), kFree);
  for (const auto& [u, p] : fixed) {
    const int j = model.index_of(u, p);
    fixed_values[j] = x[j];
  }
  PurifyOutcome outcome = purify_dense(model, budget, x, fixed_values);
  return to_fractional(model, outcome.x);
}

namespace {

// All bag-respecting, capacity-feasible subsets of the inelastic items with
// size at most cap, in (size, lexicographic) order. First-quadrant demands
// make feasibility monotone, so infeasible branches are pruned whole.
std::vector<std::vector<int>> enumerate_guesses(const DenseModel& model, std::size_t size_cap,
                                                long long enumeration_cap) {
  std::vector<int> eligible;
  for (std::size_t j = 0; j < model.items.size(); ++j) {
    if (!model.items[j].elastic) eligible.push_back(static_cast<int>(j));
  }
  const int m = model.instance->num_slots;
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::vector<double> load_r(m, 0.0), load_i(m, 0.0);
  std::vector<bool> user_used(model.num_users, false);
  long long examined = 0;

  auto feasible_with = [&](int j) {
    for (int t = 0; t < m; ++t) {
      const double r = load_r[t] + model.real_part[j][t];
      const double i = load_i[t] + model.imag_part[j][t];
      const double cap = model.instance->capacities[t];
      if (r * r + i * i > cap * cap * (1.0 + 4.0 * kFeasibilityTol)) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    out.push_back(current);
    if (current.size() == size_cap) return;
    for (std::size_t idx = start; idx < eligible.size(); ++idx) {
      const int j = eligible[idx];
      if (user_used[model.items[j].user]) continue;
      if (++examined > enumeration_cap) {
        throw resource_error("guess enumeration examined more than " +
                             std::to_string(enumeration_cap) + " candidate sets");
      }
      if (!feasible_with(j)) continue;
      current.push_back(j);
      user_used[model.items[j].user] = true;
      for (int t = 0; t < m; ++t) {
        load_r[t] += model.real_part[j][t];
        load_i[t] += model.imag_part[j][t];
      }
      dfs(idx + 1);
      for (int t = 0; t < m; ++t) {
        load_r[t] -= model.real_part[j][t];
        load_i[t] -= model.imag_part[j][t];
      }
      user_used[model.items[j].user] = false;
      current.pop_back();
    }
  };
  dfs(0);

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace

SolveResult solve_ptas(const Instance& instance, const Config& config) {
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0)) {
    throw precondition_error("epsilon must lie in (0, 1)");
  }
  const AngleStats stats = angle_stats(instance);
  if (stats.phi > kHalfPi + 1e-12) {
    throw precondition_error(
        "this scheme requires first-quadrant demands (phi <= pi/2), instance has phi = " +
        std::to_string(stats.phi));
  }

  SolveResult result;
  result.report.solver_name = "ptas";
  if (instance.total_preferences() == 0) {
    result.report = evaluate(instance, result.solution);
    result.report.solver_name = "ptas";
    return result;
  }

  const DenseModel model(instance);
  const int m = instance.num_slots;
  const std::size_t size_cap =
      static_cast<std::size_t>(std::ceil(8.0 * m / config.epsilon - 1e-12));

  double ubar = 0.0;
  for (const auto& item : model.items) ubar = std::max(ubar, item.utility);
  const double delta = 0.5 * config.epsilon * ubar;

  const std::vector<std::vector<int>> guesses =
      enumerate_guesses(model, size_cap, config.enumeration_cap);

  std::vector<double> best_x;
  double best_utility = -1.0;

  for (const auto& s1_indices : guesses) {
    double min_s1_utility = std::numeric_limits<double>::infinity();
    double s1_utility_sum = 0.0;
    Selection s1;
    for (int j : s1_indices) {
      min_s1_utility = std::min(min_s1_utility, model.items[j].utility);
      s1_utility_sum += model.items[j].utility;
      s1.chosen.emplace_back(*model.items[j].user_id, *model.items[j].pref_id);
    }
    // The excluded set: inelastic demands whose utility strictly exceeds the
    // smallest guessed one; equal utilities stay free.
    Selection s0;
    std::vector<bool> in_s1(model.items.size(), false);
    for (int j : s1_indices) in_s1[j] = true;
    for (std::size_t j = 0; j < model.items.size(); ++j) {
      if (in_s1[j] || model.items[j].elastic || s1_indices.empty()) continue;
      if (model.items[j].utility > min_s1_utility) {
        s0.chosen.emplace_back(*model.items[j].user_id, *model.items[j].pref_id);
      }
    }

    const std::vector<double> fixed = fixed_values_for(model, s1, s0);
    std::vector<double> x_cx;
    if (config.relaxation) {
      x_cx = to_dense(model, config.relaxation(instance, s1, s0, delta));
    } else {
      PenalizedGradientSolver solver(model, fixed, delta, config.fw_max_iterations);
      x_cx = solver.solve();
    }

    ProjectionBudget budget;
    model.loads(x_cx, budget.real_load, budget.imag_load);

    PurifyOutcome purified = purify_dense(model, budget, x_cx, fixed);

    std::vector<double> rounded = purified.x;
    for (std::size_t j = 0; j < rounded.size(); ++j) {
      if (!model.items[j].elastic) rounded[j] = rounded[j] >= 1.0 - 1e-9 ? 1.0 : 0.0;
    }
    const double utility = model.objective(rounded);

    if (config.audit) {
      GuessAudit audit;
      for (int j : s1_indices) audit.s1.emplace_back(*model.items[j].user_id, *model.items[j].pref_id);
      audit.s1_cap = size_cap;
      audit.s1_utility_sum = s1_utility_sum;
      audit.relaxation_objective = model.objective(x_cx);
      audit.purified_objective = model.objective(purified.x);
      audit.fractional_free_count = purified.fractional_free;
      audit.round_down_loss = audit.purified_objective - utility;
      config.audit(audit);
    }

    if (utility > best_utility) {
      best_utility = utility;
      best_x = rounded;
    }
  }

  for (std::size_t j = 0; j < best_x.size(); ++j) {
    if (best_x[j] <= 1e-12) continue;
    if (model.items[j].elastic) {
      result.solution.fractional.push_back(
          {*model.items[j].user_id, *model.items[j].pref_id, std::min(best_x[j], 1.0)});
    } else {
      result.solution.chosen.chosen.emplace_back(*model.items[j].user_id, *model.items[j].pref_id);
    }
  }
  result.solution.sort_canonical();
  result.report = evaluate(instance, result.solution);
  result.report.solver_name = "ptas";
  return result;
}

}  // namespace csched::ptas
