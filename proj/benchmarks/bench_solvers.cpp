#include <benchmark/benchmark.h>

#include "csched/fptas.hpp"
#include "csched/generator.hpp"
#include "csched/greedy.hpp"
#include "csched/oracle.hpp"
#include "csched/ptas.hpp"
#include "csched/solution.hpp"
#include "csched/ufp.hpp"

namespace {

csched::Instance single_slot_instance(int users, std::uint64_t seed = 7) {
  csched::gen::GeneratorConfig config;
  config.seed = seed;
  config.num_users = users;
  config.num_slots = 1;
  config.max_prefs_per_user = 3;
  config.angle_max = 1.25;
  return csched::gen::generate(config);
}

csched::Instance schedule_instance(int users, int slots, std::uint64_t seed = 11) {
  csched::gen::GeneratorConfig config;
  config.seed = seed;
  config.num_users = users;
  config.num_slots = slots;
  config.max_prefs_per_user = 2;
  config.angle_max = 1.3;
  config.window_model = csched::gen::WindowModel::RandomContiguous;
  config.capacity_profile = csched::gen::CapacityProfile::Random;
  config.magnitude_lo = 0.5;
  config.magnitude_hi = 6.0;
  return csched::gen::generate(config);
}

void BM_evaluate(benchmark::State& state) {
  const auto ins = schedule_instance(static_cast<int>(state.range(0)), 8);
  csched::Selection sel;
  for (const auto& u : ins.users) sel.chosen.emplace_back(u.id, u.preferences.front().id);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::evaluate(ins, sel));
  }
}
BENCHMARK(BM_evaluate)->Arg(16)->Arg(128)->Arg(1024);

void BM_greedy(benchmark::State& state) {
  const auto ins = single_slot_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::greedy::solve(ins));
  }
}
BENCHMARK(BM_greedy)->Arg(16)->Arg(256)->Arg(4096);

void BM_oracle_exact(benchmark::State& state) {
  const auto ins = single_slot_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::oracle::exact_solve(ins));
  }
}
BENCHMARK(BM_oracle_exact)->Arg(6)->Arg(9);

void BM_bifptas(benchmark::State& state) {
  const auto ins = single_slot_instance(static_cast<int>(state.range(0)));
  csched::fptas::Config config;
  config.epsilon = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::fptas::solve_bifptas(ins, config));
  }
}
BENCHMARK(BM_bifptas)->Arg(4)->Arg(8)->Arg(12);

void BM_ptas(benchmark::State& state) {
  const auto ins = single_slot_instance(static_cast<int>(state.range(0)));
  csched::ptas::Config config;
  config.epsilon = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::ptas::solve_ptas(ins, config));
  }
}
BENCHMARK(BM_ptas)->Arg(4)->Arg(8);

void BM_ufp_split(benchmark::State& state) {
  const auto ins = schedule_instance(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csched::ufp::solve_split(ins, 0.5));
  }
}
BENCHMARK(BM_ufp_split)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
