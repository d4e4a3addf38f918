// Command-line front end: generate instances, run solvers, verify solutions
// and compare algorithms across instance files.
//
// Exit codes: 0 ok, 1 infeasible, 2 usage or precondition error, 3 resource
// cap exceeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csched/elastic.hpp"
#include "csched/errors.hpp"
#include "csched/fptas.hpp"
#include "csched/generator.hpp"
#include "csched/greedy.hpp"
#include "csched/instance.hpp"
#include "csched/json_io.hpp"
#include "csched/oracle.hpp"
#include "csched/ptas.hpp"
#include "csched/solution.hpp"
#include "csched/ufp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

long long mem_cap_from_env(long long fallback) {
  const char* raw = std::getenv("CSP_SCHED_MEM_CAP");
  if (raw == nullptr) return fallback;
  try {
    return std::stoll(raw);
  } catch (const std::exception&) {
    throw csched::precondition_error("CSP_SCHED_MEM_CAP must be an integer");
  }
}

struct SolveOptions {
  std::string algorithm = "exact";
  double epsilon = 0.5;
  double delta = 0.5;
  double angle_margin = 1e-6;
  bool beta_report = false;
  bool normalize = false;
};

// Per-slot greedy pipeline over the time horizon: at each slot, unassigned
// users' demands covering it compete by efficiency; a demand is accepted only
// if the whole schedule stays feasible. Practical heuristic, no ratio
// guarantee.
csched::SolveResult solve_greedy_sequential(const csched::Instance& instance) {
  struct Candidate {
    const csched::User* user;
    const csched::DemandPreference* pref;
    double efficiency;
  };
  std::vector<csched::ComplexPower> loads(instance.num_slots);
  std::set<std::string> assigned;
  csched::SolveResult result;

  for (int t = 1; t <= instance.num_slots; ++t) {
    std::vector<Candidate> candidates;
    for (const auto& u : instance.users) {
      if (assigned.contains(u.id)) continue;
      for (const auto& p : u.preferences) {
        if (p.elastic() || p.window.front() != t) continue;
        double mass = 0.0;
        for (const auto& v : p.values) mass += v.magnitude();
        candidates.push_back({&u, &p, mass > 0.0 ? p.utility / mass : 1e18});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.efficiency != b.efficiency) return a.efficiency > b.efficiency;
      return std::tie(a.user->id, a.pref->id) < std::tie(b.user->id, b.pref->id);
    });
    for (const auto& c : candidates) {
      if (assigned.contains(c.user->id)) continue;
      bool fits = true;
      for (std::size_t i = 0; i < c.pref->window.size() && fits; ++i) {
        const int slot = c.pref->window[i];
        const csched::ComplexPower next = loads[slot - 1] + c.pref->values[i];
        const double cap = instance.capacities[slot - 1];
        fits = next.magnitude() <= cap + csched::kFeasibilityTol * cap;
      }
      if (!fits) continue;
      for (std::size_t i = 0; i < c.pref->window.size(); ++i) {
        loads[c.pref->window[i] - 1] += c.pref->values[i];
      }
      assigned.insert(c.user->id);
      result.solution.chosen.chosen.emplace_back(c.user->id, c.pref->id);
    }
  }
  result.solution.sort_canonical();
  result.report = csched::evaluate(instance, result.solution);
  result.report.solver_name = "greedy-sequential";
  return result;
}

csched::SolveResult run_algorithm(const csched::Instance& instance, const SolveOptions& opt) {
  const long long mem_cap = mem_cap_from_env(csched::dkp::kDefaultTableEntryCap);

  auto inner_for = [&](const std::string& name) -> csched::elastic::InnerSolver {
    SolveOptions inner_opt = opt;
    inner_opt.algorithm = name;
    return [inner_opt](const csched::Instance& ins) { return run_algorithm(ins, inner_opt); };
  };

  if (opt.algorithm == "exact") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto exact = csched::oracle::exact_solve(instance);
    csched::SolveResult result;
    result.solution.chosen = exact.selection;
    result.report = csched::evaluate(instance, result.solution);
    result.report.solver_name = "exact";
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm == "greedy") {
    if (instance.num_slots != 1) {
      throw csched::precondition_error("greedy requires a single time slot (m=1)");
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto result = csched::greedy::solve(instance);
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm == "greedy-sequential") {
    std::cerr << "note: greedy-sequential is a heuristic pipeline with no approximation "
                 "guarantee\n";
    const auto t0 = std::chrono::steady_clock::now();
    auto result = solve_greedy_sequential(instance);
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm == "fptas") {
    csched::fptas::Config config;
    config.epsilon = opt.epsilon;
    config.angle_margin = opt.angle_margin;
    config.table_entry_cap = mem_cap;
    config.guess_cap = std::max<long long>(mem_cap, 400'000'000);
    const auto t0 = std::chrono::steady_clock::now();
    auto result = csched::fptas::solve_bifptas(instance, config);
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm == "ptas") {
    csched::ptas::Config config;
    config.epsilon = opt.epsilon;
    const auto t0 = std::chrono::steady_clock::now();
    auto result = csched::ptas::solve_ptas(instance, config);
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm == "ufp") {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = csched::ufp::solve_split(instance, opt.delta);
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  if (opt.algorithm.rfind("mixed+", 0) == 0) {
    const std::string inner = opt.algorithm.substr(6);
    if (inner.empty() || inner.rfind("mixed", 0) == 0) {
      throw csched::precondition_error("mixed+ needs an inner algorithm, e.g. mixed+exact");
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto result = csched::elastic::solve_mixed(instance, opt.epsilon, inner_for(inner));
    result.report.elapsed = std::chrono::steady_clock::now() - t0;
    return result;
  }
  throw csched::precondition_error("unknown algorithm '" + opt.algorithm + "'");
}

void print_csv_row(const std::string& instance_path, const SolveOptions& opt,
                   const csched::SolveReport& report) {
  std::cout << instance_path << "," << opt.algorithm << "," << opt.epsilon << ","
            << report.utility << "," << report.violation_beta << "," << report.elapsed.count()
            << "\n";
}

int cmd_generate(const csched::gen::GeneratorConfig& config, const std::string& out_path) {
  const csched::Instance instance = csched::gen::generate(config);
  const std::string text = csched::instance_to_json(instance);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    csched::save_instance(instance, out_path);
  }
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const SolveOptions& opt,
              const std::string& out_path) {
  csched::Instance instance = csched::load_instance(instance_path);
  if (opt.normalize) instance = csched::normalize_rotation(instance);
  const auto violations = csched::validate(instance);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid instance: " << v << "\n";
    return kExitUsage;
  }
  const csched::SolveResult result = run_algorithm(instance, opt);
  const std::string text = csched::solution_to_json(result.solution);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    csched::save_solution(result.solution, out_path);
  }
  print_csv_row(instance_path, opt, result.report);
  if (opt.beta_report) {
    for (int t = 0; t < instance.num_slots; ++t) {
      std::cerr << "slot " << (t + 1) << ": |load| = " << result.report.per_slot_load[t].magnitude()
                << ", capacity = " << instance.capacities[t] << "\n";
    }
    std::cerr << "beta = " << result.report.violation_beta << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path, double beta) {
  const csched::Instance instance = csched::load_instance(instance_path);
  const csched::Solution solution = csched::load_solution(solution_path);
  const csched::SolveReport report = csched::evaluate(instance, solution);
  bool ok = csched::is_feasible(instance, solution, beta);
  if (!ok) {
    for (int t = 0; t < instance.num_slots; ++t) {
      const double cap = instance.capacities[t];
      const double load = report.per_slot_load[t].magnitude();
      if (load > beta * cap + csched::kFeasibilityTol * cap) {
        std::cerr << "slot " << (t + 1) << ": |load| = " << load << " exceeds " << beta << " * "
                  << cap << " by " << (load - beta * cap) << "\n";
      }
    }
    std::cerr << "infeasible at beta = " << beta << "\n";
    return kExitInfeasible;
  }
  std::cout << "feasible at beta = " << beta << " (utility " << report.utility << ", beta "
            << report.violation_beta << ")\n";
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& instance_paths,
                const std::vector<std::string>& algorithms, double epsilon, double delta) {
  std::cout << "instance,algorithm,epsilon,utility,ratio_vs_exact,beta,elapsed_ms,status\n";
  for (const auto& path : instance_paths) {
    std::optional<double> exact_utility;
    csched::Instance instance;
    try {
      instance = csched::load_instance(path);
    } catch (const std::exception& e) {
      std::cout << path << ",,,,,,,load-error\n";
      continue;
    }
    if (std::find(algorithms.begin(), algorithms.end(), "exact") != algorithms.end()) {
      try {
        exact_utility = csched::oracle::exact_solve(instance).utility;
      } catch (const std::exception&) {
        exact_utility.reset();
      }
    }
    for (const auto& algorithm : algorithms) {
      SolveOptions opt;
      opt.algorithm = algorithm;
      opt.epsilon = epsilon;
      opt.delta = delta;
      std::cout << path << "," << algorithm << "," << epsilon << ",";
      try {
        const csched::SolveResult result = run_algorithm(instance, opt);
        std::cout << result.report.utility << ",";
        if (exact_utility && *exact_utility > 0.0) {
          std::cout << (result.report.utility / *exact_utility);
        }
        std::cout << "," << result.report.violation_beta << "," << result.report.elapsed.count()
                  << ",ok\n";
      } catch (const std::exception& e) {
        std::string reason = e.what();
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        std::cout << ",,,error: " << reason << "\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-demand scheduling solvers"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a random instance as JSON");
  csched::gen::GeneratorConfig gen_config;
  std::string gen_out;
  std::string capacity_profile = "constant";
  std::string utility_model = "proportional";
  std::string window_model = "full";
  generate->add_option("--seed", gen_config.seed, "RNG seed");
  generate->add_option("--users", gen_config.num_users, "number of users");
  generate->add_option("--max-prefs", gen_config.max_prefs_per_user, "max preferences per user");
  generate->add_option("--slots", gen_config.num_slots, "number of time slots");
  generate->add_option("--angle-max", gen_config.angle_max, "largest demand argument (radians)");
  generate->add_option("--capacity-profile", capacity_profile, "constant|random|valley");
  generate->add_option("--mag-lo", gen_config.magnitude_lo, "smallest demand magnitude");
  generate->add_option("--mag-hi", gen_config.magnitude_hi, "largest demand magnitude");
  generate->add_option("--utility-model", utility_model, "proportional|uniform");
  generate->add_option("--elastic-fraction", gen_config.elastic_fraction,
                       "probability of an elastic preference");
  generate->add_option("--window-model", window_model, "full|random-contiguous");
  generate->add_option("--out", gen_out, "output path (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string solve_instance;
  std::string solve_out;
  SolveOptions solve_opt;
  solve->add_option("instance", solve_instance, "instance JSON path")->required();
  solve->add_option("--algorithm", solve_opt.algorithm,
                    "exact|greedy|greedy-sequential|fptas|ptas|ufp|mixed+<inner>");
  solve->add_option("--epsilon", solve_opt.epsilon, "accuracy parameter");
  solve->add_option("--delta", solve_opt.delta, "small/large split threshold (ufp)");
  solve->add_option("--angle-margin", solve_opt.angle_margin,
                    "required gap between the largest argument and pi (fptas)");
  solve->add_flag("--normalize", solve_opt.normalize,
                  "rotate demands so the smallest argument lies on the real axis");
  solve->add_flag("--beta-report", solve_opt.beta_report, "print per-slot loads to stderr");
  solve->add_option("--out", solve_out, "solution path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  std::string verify_instance, verify_solution;
  double verify_beta = 1.0;
  verify->add_option("instance", verify_instance, "instance JSON path")->required();
  verify->add_option("solution", verify_solution, "solution JSON path")->required();
  verify->add_option("--beta", verify_beta, "allowed violation factor");

  // compare
  auto* compare = app.add_subcommand("compare", "Run algorithms across instances, print CSV");
  std::vector<std::string> compare_instances;
  std::vector<std::string> compare_algorithms{"exact", "greedy"};
  double compare_epsilon = 0.5;
  double compare_delta = 0.5;
  compare->add_option("instances", compare_instances, "instance JSON paths");
  compare->add_option("--algorithms", compare_algorithms, "algorithms to run")->delimiter(',');
  compare->add_option("--epsilon", compare_epsilon, "accuracy parameter");
  compare->add_option("--delta", compare_delta, "small/large split threshold (ufp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      gen_config.capacity_profile = csched::gen::capacity_profile_from_string(capacity_profile);
      gen_config.utility_model = csched::gen::utility_model_from_string(utility_model);
      gen_config.window_model = csched::gen::window_model_from_string(window_model);
      return cmd_generate(gen_config, gen_out);
    }
    if (solve->parsed()) return cmd_solve(solve_instance, solve_opt, solve_out);
    if (verify->parsed()) return cmd_verify(verify_instance, verify_solution, verify_beta);
    if (compare->parsed()) {
      return cmd_compare(compare_instances, compare_algorithms, compare_epsilon, compare_delta);
    }
  } catch (const csched::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const csched::precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
