#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "csched/errors.hpp"
#include "csched/oracle.hpp"
#include "csched/ptas.hpp"
#include "support.hpp"

using namespace csched;
using test_support::instance;
using test_support::pref;
using test_support::user;

namespace {

double solution_value(const Instance& ins, const FractionalSolution& x) {
  double u = 0.0;
  for (const auto& e : x.entries) u += e.value * ins.find_preference(e.user_id, e.pref_id)->utility;
  return u;
}

// Enumerates the vertices of the budget LP (rows: per-slot real and imaginary
// budgets plus per-user sums; box bounds) by solving every square subsystem.
struct LpVertexEnumerator {
  const Instance& ins;
  ptas::ProjectionBudget budget;
  std::vector<std::pair<std::string, std::string>> vars;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  LpVertexEnumerator(const Instance& instance, const ptas::ProjectionBudget& b)
      : ins(instance), budget(b) {
    for (const auto& u : ins.users) {
      for (const auto& p : u.preferences) vars.emplace_back(u.id, p.id);
    }
    const int m = ins.num_slots;
    for (int t = 0; t < m; ++t) {
      std::vector<double> row;
      for (const auto& [uid, pid] : vars) {
        const auto* v = ins.find_preference(uid, pid)->value_at(t + 1);
        row.push_back(v ? v->re : 0.0);
      }
      rows.push_back(row);
      rhs.push_back(budget.real_load[t]);
    }
    for (int t = 0; t < m; ++t) {
      std::vector<double> row;
      for (const auto& [uid, pid] : vars) {
        const auto* v = ins.find_preference(uid, pid)->value_at(t + 1);
        row.push_back(v ? v->im : 0.0);
      }
      rows.push_back(row);
      rhs.push_back(budget.imag_load[t]);
    }
    for (const auto& u : ins.users) {
      std::vector<double> row;
      for (const auto& [uid, pid] : vars) row.push_back(uid == u.id ? 1.0 : 0.0);
      rows.push_back(row);
      rhs.push_back(1.0);
    }
  }

  bool feasible(const std::vector<double>& x) const {
    for (double v : x) {
      if (v < -1e-7 || v > 1.0 + 1e-7) return false;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += rows[r][j] * x[j];
      if (s > rhs[r] + 1e-7 * std::max(1.0, std::abs(rhs[r]))) return false;
    }
    return true;
  }

  // Solve a square system by Gaussian elimination; false if singular.
  static bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                           std::vector<double>& x) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      }
      if (std::abs(a[piv][col]) < 1e-10) return false;
      std::swap(a[col], a[piv]);
      std::swap(b[col], b[piv]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        b[r] -= f * b[col];
      }
    }
    x.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return true;
  }

  std::vector<std::vector<double>> vertices() const {
    const std::size_t v = vars.size();
    // Constraint pool: rows, then lower bounds, then upper bounds.
    const std::size_t pool = rows.size() + 2 * v;
    std::vector<std::vector<double>> found;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
      if (pick.size() == v) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t idx : pick) {
          if (idx < rows.size()) {
            a.push_back(rows[idx]);
            b.push_back(rhs[idx]);
          } else if (idx < rows.size() + v) {
            std::vector<double> row(v, 0.0);
            row[idx - rows.size()] = 1.0;
            a.push_back(row);
            b.push_back(0.0);
          } else {
            std::vector<double> row(v, 0.0);
            row[idx - rows.size() - v] = 1.0;
            a.push_back(row);
            b.push_back(1.0);
          }
        }
        std::vector<double> x;
        if (solve_square(a, b, x) && feasible(x)) found.push_back(x);
        return;
      }
      for (std::size_t idx = start; idx < pool; ++idx) {
        pick.push_back(idx);
        choose(idx + 1);
        pick.pop_back();
      }
    };
    choose(0);
    return found;
  }
};

}  // namespace

TEST_CASE("relaxation with everything pinned is exact") {
  const Instance ins = instance(
      {10.0}, {user("u1", {pref("a", 3.0, 0.0, 4.0)}), user("u2", {pref("a", 0.0, 4.0, 3.0)})});
  Selection s1{{{"u1", "a"}, {"u2", "a"}}};
  const auto x = ptas::solve_relaxation(ins, s1, {}, 0.1);
  CHECK(x.value_of("u1", "a") == doctest::Approx(1.0));
  CHECK(x.value_of("u2", "a") == doctest::Approx(1.0));
  CHECK(solution_value(ins, x) == doctest::Approx(7.0));
}

TEST_CASE("relaxation saturates a tight single-demand instance") {
  const Instance ins = instance({5.0}, {user("u1", {pref("a", 3.0, 4.0, 7.0)})});
  const double delta = 0.35;  // eps/2 * max utility at eps = 0.1
  const auto x = ptas::solve_relaxation(ins, {}, {}, delta);
  CHECK(solution_value(ins, x) >= 7.0 - delta - 1e-9);
  CHECK(x.value_of("u1", "a") <= 1.0 + 1e-9);
}

TEST_CASE("relaxation dominates the integral optimum up to delta") {
  test_support::Rng rng(66);
  for (int trial = 0; trial < 25; ++trial) {
    const auto ins = csched::gen::generate(test_support::small_config(
        23000 + trial, rng.uniform_int(1, 4), rng.uniform_int(1, 2), 1.2, 2));
    double max_utility = 0.0;
    for (const auto& u : ins.users) {
      for (const auto& p : u.preferences) max_utility = std::max(max_utility, p.utility);
    }
    const double delta = 0.25 * max_utility;
    const auto x = ptas::solve_relaxation(ins, {}, {}, delta);
    const auto budget = ptas::projection_budget(ins, x);
    for (int t = 0; t < ins.num_slots; ++t) {
      CHECK(budget.real_load[t] * budget.real_load[t] +
                budget.imag_load[t] * budget.imag_load[t] <=
            ins.capacities[t] * ins.capacities[t] * (1.0 + 1e-6));
    }
    CHECK(solution_value(ins, x) >= oracle::exact_solve(ins).utility - delta - 1e-9);
  }
}

TEST_CASE("projection budget of simple solutions") {
  const Instance ins = instance({5.0}, {user("u1", {pref("a", 3.0, 4.0, 7.0)})});
  const auto zero = ptas::projection_budget(ins, {});
  CHECK(zero.real_load[0] == 0.0);
  CHECK(zero.imag_load[0] == 0.0);
  FractionalSolution full;
  full.entries = {{"u1", "a", 1.0}};
  const auto budget = ptas::projection_budget(ins, full);
  CHECK(budget.real_load[0] == doctest::Approx(3.0));
  CHECK(budget.imag_load[0] == doctest::Approx(4.0));
}

TEST_CASE("purify returns an already integral point unchanged") {
  const Instance ins = instance(
      {10.0}, {user("u1", {pref("a", 3.0, 0.0, 4.0)}), user("u2", {pref("a", 0.0, 4.0, 3.0)})});
  FractionalSolution start;
  start.entries = {{"u1", "a", 1.0}};
  const auto budget = ptas::projection_budget(ins, start);
  const auto purified = ptas::purify_to_bfs(ins, budget, start, {});
  CHECK(purified.value_of("u1", "a") == doctest::Approx(1.0));
  CHECK(purified.value_of("u2", "a") == 0.0);
}

TEST_CASE("purify resolves the symmetric split without losing objective") {
  const Instance ins = instance(
      {10.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0)}), user("u2", {pref("a", 1.0, 0.0, 1.0)})});
  FractionalSolution start;
  start.entries = {{"u1", "a", 0.5}, {"u2", "a", 0.5}};
  const auto budget = ptas::projection_budget(ins, start);
  const auto purified = ptas::purify_to_bfs(ins, budget, start, {});
  const double v1 = purified.value_of("u1", "a");
  const double v2 = purified.value_of("u2", "a");
  CHECK(v1 + v2 == doctest::Approx(1.0));
  CHECK(std::min(v1, v2) == doctest::Approx(0.0));
  CHECK(std::max(v1, v2) == doctest::Approx(1.0));
}

TEST_CASE("purified points are vertices and never lose objective") {
  test_support::Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ins = csched::gen::generate(test_support::small_config(
        24000 + trial, rng.uniform_int(1, 3), rng.uniform_int(1, 2), 1.3, 2));
    if (ins.total_preferences() > 4) continue;  // keep vertex enumeration cheap
    const auto x_cx = ptas::solve_relaxation(ins, {}, {}, 0.3);
    const auto budget = ptas::projection_budget(ins, x_cx);
    const auto purified = ptas::purify_to_bfs(ins, budget, x_cx, {});

    CHECK(solution_value(ins, purified) >= solution_value(ins, x_cx) - 1e-9);

    int fractional = 0;
    for (const auto& e : purified.entries) {
      if (e.value > 1e-9 && e.value < 1.0 - 1e-9) ++fractional;
    }
    CHECK(fractional <= 4 * ins.num_slots);

    LpVertexEnumerator enumerator(ins, budget);
    const auto vertices = enumerator.vertices();
    REQUIRE(!vertices.empty());
    double best_match = 1e18;
    for (const auto& vertex : vertices) {
      double dist = 0.0;
      for (std::size_t j = 0; j < enumerator.vars.size(); ++j) {
        const auto& [uid, pid] = enumerator.vars[j];
        dist = std::max(dist, std::abs(vertex[j] - purified.value_of(uid, pid)));
      }
      best_match = std::min(best_match, dist);
    }
    CHECK(best_match <= 1e-6);
  }
}

TEST_CASE("full-enumeration regime recovers the exact optimum") {
  test_support::Rng rng(111);
  for (int trial = 0; trial < 12; ++trial) {
    auto gen_config = test_support::small_config(25000 + trial, rng.uniform_int(2, 4),
                                                 rng.uniform_int(1, 2), 1.4, 2);
    if (trial % 2 == 1) gen_config.window_model = csched::gen::WindowModel::RandomContiguous;
    const auto ins = csched::gen::generate(gen_config);
    ptas::Config config;
    config.epsilon = 0.5;
    const auto result = ptas::solve_ptas(ins, config);
    const auto exact = oracle::exact_solve(ins);
    CHECK(result.report.utility == doctest::Approx(exact.utility).epsilon(1e-9));
    CHECK(is_feasible(ins, result.solution, 1.0));
  }
}

TEST_CASE("ptas on an empty instance") {
  const auto result = ptas::solve_ptas(instance({5.0}, {}), {});
  CHECK(result.report.utility == 0.0);
}

TEST_CASE("ptas rejects second-quadrant instances and bad epsilon") {
  const Instance wide = instance({10.0}, {user("u1", {pref("a", -1.0, 1.0, 1.0)})});
  CHECK_THROWS_WITH_AS(ptas::solve_ptas(wide, {}), doctest::Contains("first-quadrant"),
                       precondition_error);
  const Instance ok = instance({10.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0)})});
  ptas::Config config;
  config.epsilon = 1.5;
  CHECK_THROWS_AS(ptas::solve_ptas(ok, config), precondition_error);
}

TEST_CASE("rounding regime keeps half the oracle value and audits stay clean") {
  test_support::Rng rng(222);
  for (int trial = 0; trial < 6; ++trial) {
    auto config_gen = test_support::small_config(26000 + trial, 10, 1, 1.2, 1);
    config_gen.magnitude_lo = 2.5;
    config_gen.magnitude_hi = 9.0;
    const auto ins = csched::gen::generate(config_gen);

    ptas::Config config;
    config.epsilon = 0.5;
    int audited = 0;
    config.audit = [&](const ptas::GuessAudit& audit) {
      ++audited;
      CHECK(audit.fractional_free_count <= 4 * ins.num_slots);
      CHECK(audit.purified_objective >= audit.relaxation_objective - 1e-9);
      if (audit.s1.size() == audit.s1_cap && !audit.s1.empty()) {
        CHECK(audit.round_down_loss <=
              4.0 * ins.num_slots * audit.s1_utility_sum / audit.s1.size() + 1e-9);
      }
    };
    const auto result = ptas::solve_ptas(ins, config);
    CHECK(audited > 0);
    const auto exact = oracle::exact_solve(ins);
    CHECK(result.report.utility >= 0.5 * exact.utility - 1e-9);
    CHECK(is_feasible(ins, result.solution, 1.0));
  }
}

TEST_CASE("a plugged relaxation solver produces the same guarantees") {
  test_support::Rng rng(444);
  for (int trial = 0; trial < 6; ++trial) {
    const auto ins = csched::gen::generate(test_support::small_config(
        29000 + trial, rng.uniform_int(2, 4), 1, 1.3, 2));
    ptas::Config config;
    config.epsilon = 0.5;
    config.relaxation = [](const Instance& x, const Selection& s1, const Selection& s0,
                           double delta) {
      return ptas::solve_relaxation(x, s1, s0, delta);
    };
    const auto result = ptas::solve_ptas(ins, config);
    const auto exact = oracle::exact_solve(ins);
    CHECK(result.report.utility == doctest::Approx(exact.utility).epsilon(1e-9));
    CHECK(is_feasible(ins, result.solution, 1.0));
  }
}

TEST_CASE("ptas leaves elastic demands fractional and feasible") {
  const Instance ins = instance(
      {5.0}, {user("u1", {pref("a", 3.0, 0.0, 4.0)}),
              user("u2", {pref("e", 5.0, 0.0, 6.0, {1}, /*elastic=*/true)})});
  ptas::Config config;
  config.epsilon = 0.25;
  const auto result = ptas::solve_ptas(ins, config);
  CHECK(is_feasible(ins, result.solution, 1.0));
  // The elastic demand can fill whatever the chosen inelastic part leaves.
  CHECK(result.report.utility >= 4.0 - 1e-9);
  bool has_fractional_elastic = false;
  for (const auto& e : result.solution.fractional) {
    has_fractional_elastic = has_fractional_elastic || e.pref_id == "e";
  }
  CHECK(has_fractional_elastic);
}
