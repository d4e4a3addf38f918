#pragma once

#include <string>

#include "csched/instance.hpp"
#include "csched/solution.hpp"

namespace csched {

// Instance schema:
//   {"m": int, "capacities": [real], "users": [{"id": str, "preferences":
//    [{"id": str, "window": [int], "values": [[re, im]], "utility": real,
//      "elastic": bool}]}]}
// Serialization preserves user and preference order and is byte-stable for a
// fixed instance. Malformed input raises precondition_error carrying the
// parser's location message.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& instance);

// Solution schema: {"chosen": [[user, pref]], "fractional": [[user, pref, x]]}
Solution solution_from_json(const std::string& text);
std::string solution_to_json(const Solution& solution);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);
Solution load_solution(const std::string& path);
void save_solution(const Solution& solution, const std::string& path);

}  // namespace csched
