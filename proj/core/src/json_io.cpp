#include "csched/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csched/errors.hpp"

namespace csched {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw precondition_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw precondition_error("cannot write to '" + path + "'");
  out << text;
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    Instance ins;
    ins.num_slots = j.at("m").get<int>();
    ins.capacities = j.at("capacities").get<std::vector<double>>();
    for (const auto& ju : j.at("users")) {
      User u;
      u.id = ju.at("id").get<std::string>();
      for (const auto& jp : ju.at("preferences")) {
        DemandPreference p;
        p.id = jp.at("id").get<std::string>();
        p.window = jp.at("window").get<std::vector<int>>();
        for (const auto& jv : jp.at("values")) {
          if (!jv.is_array() || jv.size() != 2) {
            throw precondition_error("instance JSON: each value must be a [re, im] pair (user '" +
                                     u.id + "' pref '" + p.id + "')");
          }
          p.values.push_back({jv.at(0).get<double>(), jv.at(1).get<double>()});
        }
        p.utility = jp.at("utility").get<double>();
        p.elasticity =
            jp.value("elastic", false) ? Elasticity::Elastic : Elasticity::Inelastic;
        u.preferences.push_back(std::move(p));
      }
      ins.users.push_back(std::move(u));
    }
    return ins;
  } catch (const nlohmann::json::exception& e) {
    throw precondition_error(std::string("instance JSON: ") + e.what());
  }
}

std::string instance_to_json(const Instance& instance) {
  ordered_json j;
  j["m"] = instance.num_slots;
  j["capacities"] = instance.capacities;
  j["users"] = ordered_json::array();
  for (const auto& u : instance.users) {
    ordered_json ju;
    ju["id"] = u.id;
    ju["preferences"] = ordered_json::array();
    for (const auto& p : u.preferences) {
      ordered_json jp;
      jp["id"] = p.id;
      jp["window"] = p.window;
      jp["values"] = ordered_json::array();
      for (const auto& v : p.values) jp["values"].push_back({v.re, v.im});
      jp["utility"] = p.utility;
      jp["elastic"] = p.elastic();
      ju["preferences"].push_back(std::move(jp));
    }
    j["users"].push_back(std::move(ju));
  }
  return j.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    Solution s;
    for (const auto& pair : j.at("chosen")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw precondition_error("solution JSON: chosen entries must be [user, pref] pairs");
      }
      s.chosen.chosen.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    for (const auto& triple : j.value("fractional", ordered_json::array())) {
      if (!triple.is_array() || triple.size() != 3) {
        throw precondition_error("solution JSON: fractional entries must be [user, pref, x]");
      }
      s.fractional.push_back({triple.at(0).get<std::string>(), triple.at(1).get<std::string>(),
                              triple.at(2).get<double>()});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw precondition_error(std::string("solution JSON: ") + e.what());
  }
}

std::string solution_to_json(const Solution& solution) {
  ordered_json j;
  j["chosen"] = ordered_json::array();
  for (const auto& [user_id, pref_id] : solution.chosen.chosen) {
    j["chosen"].push_back({user_id, pref_id});
  }
  j["fractional"] = ordered_json::array();
  for (const auto& e : solution.fractional) {
    j["fractional"].push_back(ordered_json::array({e.user_id, e.pref_id, e.value}));
  }
  return j.dump(2) + "\n";
}

Instance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

void save_instance(const Instance& instance, const std::string& path) {
  write_file(path, instance_to_json(instance));
}

Solution load_solution(const std::string& path) { return solution_from_json(read_file(path)); }

void save_solution(const Solution& solution, const std::string& path) {
  write_file(path, solution_to_json(solution));
}

}  // namespace csched
