#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csched/errors.hpp"
#include "csched/instance.hpp"
#include "csched/json_io.hpp"
#include "csched/power.hpp"
#include "csched/solution.hpp"
#include "support.hpp"

using namespace csched;
using test_support::instance;
using test_support::pref;
using test_support::user;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("validate accepts an empty instance") {
  const Instance ins = instance({1.0}, {});
  CHECK(validate(ins).empty());
}

TEST_CASE("validate flags quadrant mixing within one user") {
  const Instance ins =
      instance({10.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0), pref("b", -1.0, 1.0, 1.0)})});
  const auto violations = validate(ins);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("quadrant mixing") != std::string::npos);
}

TEST_CASE("validate flags a demand magnitude above capacity") {
  const Instance ins = instance({4.0}, {user("u1", {pref("a", 3.0, 4.0, 1.0)})});
  const auto violations = validate(ins);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("> C_t") != std::string::npos);
}

TEST_CASE("validate flags nonpositive utility, bad slots, lower half-plane") {
  Instance ins = instance({5.0, 5.0}, {user("u1", {pref("a", 1.0, 0.0, 0.0, {3})})});
  ins.users[0].preferences.push_back(pref("b", 1.0, -1.0, 1.0, {1}));
  const auto violations = validate(ins);
  bool bad_slot = false, bad_utility = false, bad_half_plane = false;
  for (const auto& v : violations) {
    bad_slot = bad_slot || v.find("bad slot index") != std::string::npos;
    bad_utility = bad_utility || v.find("utility must be positive") != std::string::npos;
    bad_half_plane = bad_half_plane || v.find("upper half-plane") != std::string::npos;
  }
  CHECK(bad_slot);
  CHECK(bad_utility);
  CHECK(bad_half_plane);
}

TEST_CASE("evaluate of an empty selection") {
  const Instance ins = instance({5.0}, {user("u1", {pref("a", 3.0, 4.0, 7.0)})});
  const SolveReport report = evaluate(ins, Selection{});
  CHECK(report.utility == 0.0);
  CHECK(report.per_slot_load[0] == ComplexPower{0.0, 0.0});
  CHECK(report.violation_beta == 1.0);
}

TEST_CASE("evaluate sums loads and computes the violation factor") {
  const Instance ins = instance({5.0}, {user("u1", {pref("a", 3.0, 4.0, 7.0)})});
  const SolveReport report = evaluate(ins, Selection{{{"u1", "a"}}});
  CHECK(report.per_slot_load[0] == ComplexPower{3.0, 4.0});
  CHECK(report.per_slot_load[0].magnitude() == doctest::Approx(5.0));
  CHECK(report.violation_beta == doctest::Approx(1.0));
  CHECK(is_feasible(ins, Selection{{{"u1", "a"}}}, 1.0));
}

TEST_CASE("evaluate past capacity and the beta threshold") {
  const Instance ins = instance(
      {9.0}, {user("u1", {pref("a", 3.0, 4.0, 1.0)}), user("u2", {pref("b", 4.0, 3.0, 1.0)})});
  const Selection sel{{{"u1", "a"}, {"u2", "b"}}};
  const SolveReport report = evaluate(ins, sel);
  CHECK(report.per_slot_load[0].magnitude() == doctest::Approx(std::sqrt(98.0)));
  CHECK(report.violation_beta == doctest::Approx(std::sqrt(98.0) / 9.0));
  CHECK(report.violation_beta > 1.09);
  CHECK_FALSE(is_feasible(ins, sel, 1.0));
  CHECK(is_feasible(ins, sel, 1.1));
}

TEST_CASE("evaluate rejects unknown identifiers") {
  const Instance ins = instance({5.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0)})});
  CHECK_THROWS_AS(evaluate(ins, Selection{{{"zz", "a"}}}), precondition_error);
  CHECK_THROWS_AS(evaluate(ins, Selection{{{"u1", "zz"}}}), precondition_error);
}

TEST_CASE("two preferences of one user are infeasible at any beta") {
  const Instance ins =
      instance({100.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0), pref("b", 0.0, 1.0, 1.0)})});
  const Selection sel{{{"u1", "a"}, {"u1", "b"}}};
  CHECK_FALSE(is_feasible(ins, sel, 1.0));
  CHECK_FALSE(is_feasible(ins, sel, 50.0));
}

TEST_CASE("angle_stats") {
  CHECK(angle_stats(instance({10.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0)}),
                                      user("u2", {pref("b", 0.0, 1.0, 1.0)})}))
            .phi == doctest::Approx(kPi / 2));
  const AngleStats wide = angle_stats(instance(
      {10.0}, {user("u1", {pref("a", 1.0, 1.0, 1.0)}), user("u2", {pref("b", -1.0, 1.0, 1.0)})}));
  CHECK(wide.phi == doctest::Approx(3 * kPi / 4));
  CHECK(wide.theta == doctest::Approx(kPi / 4));
  const AngleStats single = angle_stats(instance({10.0}, {user("u1", {pref("a", 1.0, 0.0, 1.0)})}));
  CHECK(single.phi == 0.0);
  CHECK(single.theta == 0.0);
}

TEST_CASE("cone aggregation bound: orthogonal unit vectors reach equality") {
  const ConeBoundCheck check = angle_sum_bound_check({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(check.lhs == doctest::Approx(std::sqrt(2.0)));
  CHECK(check.rhs == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(check.lhs - check.rhs) < 1e-9);
  CHECK(check.holds);
}

TEST_CASE("cone aggregation bound: parallel vectors") {
  const ConeBoundCheck check = angle_sum_bound_check({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(check.lhs == doctest::Approx(1.0));
  CHECK(check.rhs == doctest::Approx(1.0));
  CHECK(check.holds);
}

TEST_CASE("cone aggregation bound holds on random cone-constrained sets") {
  test_support::Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const double base = rng.uniform(0.0, kPi);
    const double half_width = rng.uniform(0.0, kPi / 4);
    const int count = rng.uniform_int(2, 10);
    std::vector<ComplexPower> vectors;
    for (int i = 0; i < count; ++i) {
      const double angle = base + rng.uniform(-half_width, half_width);
      const double mag = rng.uniform(0.1, 10.0);
      vectors.push_back({mag * std::cos(angle), mag * std::sin(angle)});
    }
    const ConeBoundCheck check = angle_sum_bound_check(vectors);
    CHECK(check.holds);
  }
}

TEST_CASE("feasibility agrees with the evaluated violation factor") {
  test_support::Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ins = csched::gen::generate(
        test_support::small_config(1000 + trial, rng.uniform_int(1, 5), rng.uniform_int(1, 3),
                                   rng.uniform(0.0, 2.5)));
    REQUIRE(validate(ins).empty());
    const Selection sel = test_support::random_selection(ins, rng);
    const SolveReport report = evaluate(ins, sel);
    for (double beta : {1.0, 1.05, 1.5, 2.0}) {
      const bool feasible = is_feasible(ins, sel, beta);
      if (report.violation_beta <= beta) CHECK(feasible);
      if (report.violation_beta > beta + 1e-6) CHECK_FALSE(feasible);
    }
  }
}

TEST_CASE("feasibility of a fixed selection is invariant under rotation") {
  test_support::Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto ins = csched::gen::generate(
        test_support::small_config(5000 + trial, rng.uniform_int(1, 5), 2, rng.uniform(0.0, 1.2)));
    const Selection sel = test_support::random_selection(ins, rng);
    const SolveReport before = evaluate(ins, sel);
    // Rotate, keeping all arguments inside [0, pi).
    const double phi = angle_stats(ins).phi;
    const double rho = rng.uniform(0.0, std::max(0.0, kPi - phi - 1e-6));
    const Instance turned = rotated(ins, rho);
    const SolveReport after = evaluate(turned, sel);
    CHECK(after.violation_beta == doctest::Approx(before.violation_beta).epsilon(1e-9));
    for (int t = 0; t < ins.num_slots; ++t) {
      CHECK(after.per_slot_load[t].magnitude() ==
            doctest::Approx(before.per_slot_load[t].magnitude()).epsilon(1e-9));
    }
    CHECK(is_feasible(turned, sel, 1.0) == is_feasible(ins, sel, 1.0));
  }
}

TEST_CASE("aggregate magnitude never exceeds the magnitude sum") {
  test_support::Rng rng(93);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ins = csched::gen::generate(
        test_support::small_config(9000 + trial, rng.uniform_int(1, 6), 1, rng.uniform(0.0, 3.0)));
    const Selection sel = test_support::random_selection(ins, rng);
    const SolveReport report = evaluate(ins, sel);
    double magnitude_sum = 0.0;
    for (const auto& [uid, pid] : sel.chosen) {
      magnitude_sum += ins.find_preference(uid, pid)->values[0].magnitude();
    }
    CHECK(report.per_slot_load[0].magnitude() <= magnitude_sum + 1e-9);
  }
}

TEST_CASE("normalize_rotation brings fourth-quadrant demands into range") {
  Instance ins = instance({10.0}, {user("u1", {pref("a", 1.0, -1.0, 1.0)}),
                                   user("u2", {pref("b", 1.0, 1.0, 1.0)})});
  CHECK_FALSE(validate(ins).empty());  // below the real axis
  const Instance fixed = normalize_rotation(ins);
  CHECK(validate(fixed).empty());
  CHECK(angle_stats(fixed).phi == doctest::Approx(kPi / 2));
}

TEST_CASE("generated instances validate and honor their recipe") {
  test_support::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    auto config = test_support::small_config(28000 + trial, rng.uniform_int(0, 6),
                                             rng.uniform_int(1, 4), rng.uniform(0.0, 2.8));
    config.elastic_fraction = trial % 3 == 0 ? 0.0 : (trial % 3 == 1 ? 1.0 : 0.5);
    config.capacity_profile = static_cast<csched::gen::CapacityProfile>(trial % 3);
    config.window_model = trial % 2 == 0 ? csched::gen::WindowModel::Full
                                         : csched::gen::WindowModel::RandomContiguous;
    const auto ins = csched::gen::generate(config);
    CHECK(validate(ins).empty());
    CHECK(angle_stats(ins).phi <= config.angle_max + 1e-12);
    int elastic_count = 0;
    int total = 0;
    for (const auto& u : ins.users) {
      for (const auto& p : u.preferences) {
        ++total;
        elastic_count += p.elastic() ? 1 : 0;
      }
    }
    if (config.elastic_fraction == 0.0) CHECK(elastic_count == 0);
    if (config.elastic_fraction == 1.0) CHECK(elastic_count == total);
  }
}

TEST_CASE("instance JSON round-trip is canonical") {
  const auto ins = csched::gen::generate(test_support::small_config(42, 4, 3, 2.0));
  const std::string once = instance_to_json(ins);
  const Instance back = instance_from_json(once);
  CHECK(instance_to_json(back) == once);
  CHECK(back.users.size() == ins.users.size());
}

TEST_CASE("malformed JSON reports a located parse error") {
  CHECK_THROWS_WITH_AS(instance_from_json("{\"m\": 1, "), doctest::Contains("instance JSON"),
                       precondition_error);
}

TEST_CASE("solution JSON round-trip") {
  Solution s;
  s.chosen.chosen = {{"u1", "a"}, {"u2", "b"}};
  s.fractional = {{"u3", "c", 0.25}};
  const std::string text = solution_to_json(s);
  const Solution back = solution_from_json(text);
  CHECK(back == s);
}
