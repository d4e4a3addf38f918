#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csched/elastic.hpp"
#include "csched/errors.hpp"
#include "csched/oracle.hpp"
#include "support.hpp"

using namespace csched;
using test_support::instance;
using test_support::pref;
using test_support::user;

namespace {

SolveResult oracle_inner(const Instance& ins) {
  const auto exact = oracle::exact_solve(ins);
  SolveResult result;
  result.solution.chosen = exact.selection;
  result.report = evaluate(ins, result.solution);
  result.report.solver_name = "exact";
  return result;
}

csched::gen::GeneratorConfig mixed_config(std::uint64_t seed) {
  auto config = test_support::small_config(seed, 3, 1, 1.2, 2);
  config.elastic_fraction = 0.5;
  return config;
}

}  // namespace

TEST_CASE("lower bound from inelastic and elastic preferences") {
  CHECK(elastic::compute_lb(instance({5.0}, {user("u1", {pref("a", 1.0, 0.0, 5.0)})})) == 5.0);

  // Elastic u=4 with |s|=10 against C=5 scales to 2; the inelastic 5 wins.
  const Instance both = instance(
      {5.0}, {user("u1", {pref("a", 1.0, 0.0, 5.0)}),
              user("u2", {pref("e", 10.0, 0.0, 4.0, {1}, /*elastic=*/true)})});
  CHECK(elastic::compute_lb(both) == doctest::Approx(5.0));

  Instance fitting = instance(
      {5.0}, {user("u2", {pref("e", 2.0, 0.0, 4.0, {1}, /*elastic=*/true)})});
  const auto violations = validate(fitting);
  CHECK(violations.empty());
  CHECK(elastic::compute_lb(fitting) == doctest::Approx(4.0));

  CHECK_THROWS_AS(elastic::compute_lb(instance({5.0}, {})), precondition_error);
}

TEST_CASE("discretize builds the expected level ladder") {
  // n=2 users, elastic u=4, eps=0.5, LB=5 (from the inelastic preference):
  // ratio 2*4/(0.5*5) = 3.2, so ceil(log_{1.5} 3.2) = 3 levels.
  const Instance ins = instance(
      {10.0}, {user("u1", {pref("a", 1.0, 0.0, 5.0)}),
               user("u2", {pref("e", 4.0, 0.0, 4.0, {1}, /*elastic=*/true)})});
  CHECK(elastic::compute_lb(ins) == doctest::Approx(5.0));
  const auto disc = elastic::discretize(ins, 0.5);
  CHECK(disc.levels.size() == 3);
  CHECK(validate(disc.instance).empty());
  for (const auto& level : disc.levels) {
    CHECK(level.fraction > 0.0);
    CHECK(level.fraction <= 1.0);
  }
  // Consecutive uncapped levels scale by exactly (1 + eps).
  for (std::size_t i = 1; i < disc.levels.size(); ++i) {
    if (disc.levels[i].fraction < 1.0) {
      CHECK(disc.levels[i].fraction ==
            doctest::Approx(1.5 * disc.levels[i - 1].fraction).epsilon(1e-12));
    }
  }
  // The top level is the full preference.
  CHECK(disc.levels.back().fraction == doctest::Approx(1.0));
}

TEST_CASE("discretize is the identity on all-inelastic instances") {
  const auto ins = csched::gen::generate(test_support::small_config(21, 3, 2, 1.0));
  const auto disc = elastic::discretize(ins, 0.25);
  CHECK(disc.levels.empty());
  CHECK(disc.instance.users.size() == ins.users.size());
  CHECK(disc.instance.total_preferences() == ins.total_preferences());
}

TEST_CASE("map_back keeps inelastic choices and converts levels to fractions") {
  const Instance ins = instance(
      {10.0}, {user("u1", {pref("a", 1.0, 0.0, 5.0)}),
               user("u2", {pref("e", 4.0, 0.0, 4.0, {1}, /*elastic=*/true)})});
  const auto disc = elastic::discretize(ins, 0.5);

  Selection level_sel;
  level_sel.chosen.emplace_back("u1", "a");
  level_sel.chosen.emplace_back("u2", disc.levels.back().level_pref_id);
  const Solution mixed = elastic::map_back(level_sel, disc);
  CHECK(mixed.chosen == Selection{{{"u1", "a"}}});
  REQUIRE(mixed.fractional.size() == 1);
  CHECK(mixed.fractional[0].pref_id == "e");
  CHECK(mixed.fractional[0].value >= 1.0 / 1.5 - 1e-12);
  CHECK(mixed.fractional[0].value <= 1.0);
}

TEST_CASE("map_back preserves per-slot loads exactly") {
  test_support::Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    auto config = mixed_config(19000 + trial);
    config.num_slots = rng.uniform_int(1, 2);
    const auto ins = csched::gen::generate(config);
    const double eps = rng.flip() ? 0.25 : 0.5;
    const auto disc = elastic::discretize(ins, eps);
    test_support::Rng sel_rng(trial);
    const Selection level_sel = test_support::random_selection(disc.instance, sel_rng);
    if (!is_feasible(disc.instance, level_sel, 1.0)) continue;
    const Solution mixed = elastic::map_back(level_sel, disc);
    const auto before = evaluate(disc.instance, level_sel);
    const auto after = evaluate(ins, mixed);
    for (int t = 0; t < ins.num_slots; ++t) {
      CHECK(std::abs(before.per_slot_load[t].re - after.per_slot_load[t].re) <= 1e-9);
      CHECK(std::abs(before.per_slot_load[t].im - after.per_slot_load[t].im) <= 1e-9);
    }
    CHECK(after.utility == doctest::Approx(before.utility).epsilon(1e-12));
  }
}

TEST_CASE("solve_mixed with the oracle inner equals the oracle on inelastic instances") {
  const auto ins = csched::gen::generate(test_support::small_config(2222, 4, 1, 1.0));
  const auto mixed = elastic::solve_mixed(ins, 0.25, oracle_inner);
  CHECK(mixed.report.utility == doctest::Approx(oracle::exact_solve(ins).utility));
  CHECK(mixed.report.solver_name == "mixed+exact");
}

TEST_CASE("solve_mixed approaches the mixed oracle on the single elastic demand") {
  const Instance ins =
      instance({5.0}, {user("u1", {pref("e", 10.0, 0.0, 8.0, {1}, /*elastic=*/true)})});
  const double eps = 0.25;
  const auto mixed = elastic::solve_mixed(ins, eps, oracle_inner);
  const double oracle_value = oracle::exact_solve_mixed(ins, 100);
  const double grid_error = 8.0 / 100.0;
  CHECK(mixed.report.utility >= (1.0 - eps) * oracle_value - grid_error - 1e-9);
  CHECK(is_feasible(ins, mixed.solution, 1.0));
}

TEST_CASE("the lower bound is achievable: mixed optimum dominates it") {
  test_support::Rng rng(433);
  for (int trial = 0; trial < 25; ++trial) {
    const auto ins = csched::gen::generate(mixed_config(21000 + trial));
    const double lb = elastic::compute_lb(ins);
    double elastic_utility_sum = 0.0;
    for (const auto& u : ins.users) {
      for (const auto& p : u.preferences) {
        if (p.elastic()) elastic_utility_sum += p.utility;
      }
    }
    const int grid = 50;
    const double optimum = oracle::exact_solve_mixed(ins, grid);
    CHECK(optimum >= lb - elastic_utility_sum / grid - 1e-9);
  }
}

TEST_CASE("solve_mixed ratio against the mixed oracle on random micro instances") {
  test_support::Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ins = csched::gen::generate(mixed_config(20000 + trial));
    const double eps = rng.flip() ? 0.25 : 0.5;
    const auto mixed = elastic::solve_mixed(ins, eps, oracle_inner);
    const int grid = 40;
    double elastic_utility_sum = 0.0;
    for (const auto& u : ins.users) {
      for (const auto& p : u.preferences) {
        if (p.elastic()) elastic_utility_sum += p.utility;
      }
    }
    const double oracle_value = oracle::exact_solve_mixed(ins, grid);
    CHECK(mixed.report.utility >=
          (1.0 - eps) * oracle_value - elastic_utility_sum / grid - 1e-9);
    CHECK(is_feasible(ins, mixed.solution, 1.0));
  }
}
