#include "exaperf/scenario.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "exaperf/errors.hpp"

namespace exaperf {

using nlohmann::json;

Scenario load_scenario(const std::vector<std::string>& paths) {
  Scenario s;
  s.source_files = paths;
  bool have_machine = false, have_method = false, have_energy = false,
       have_resilience = false, have_doubling = false;

  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw parse_error(path, e.what());
    }
    try {
      if (j.contains("machine")) {
        if (have_machine) throw parse_error(path, "duplicate 'machine' section");
        s.machine = machine_from_json(j.at("machine"));
        have_machine = true;
      }
      if (j.contains("method")) {
        if (have_method) throw parse_error(path, "duplicate 'method' section");
        s.method = method_from_json(j.at("method"));
        have_method = true;
      }
      if (j.contains("energy")) {
        if (have_energy) throw parse_error(path, "duplicate 'energy' section");
        s.energy = energy_from_json(j.at("energy"));
        have_energy = true;
      }
      if (j.contains("resilience")) {
        if (have_resilience) throw parse_error(path, "duplicate 'resilience' section");
        s.resilience = resilience_from_json(j.at("resilience"));
        have_resilience = true;
      }
      if (j.contains("doubling_times")) {
        if (have_doubling) throw parse_error(path, "duplicate 'doubling_times' section");
        for (auto& [key, val] : j.at("doubling_times").items())
          s.doubling_times[key] = val.get<double>();
        have_doubling = true;
      }
      if (j.contains("outputs")) {
        for (const auto& sel : j.at("outputs")) s.outputs.push_back(sel.get<std::string>());
      }
      if (j.contains("overlap")) {
        std::string o = j.at("overlap").get<std::string>();
        if (o == "sum") s.overlap = Overlap::Sum;
        else if (o == "max") s.overlap = Overlap::Max;
        else throw parse_error(path, "overlap must be 'sum' or 'max'");
      }
    } catch (const json::exception& e) {
      throw parse_error(path, e.what());
    }
  }
  if (!have_machine) throw parse_error(paths.empty() ? "" : paths.front(),
                                       "no 'machine' section found in the given files");
  if (!have_method) {
    // Bare-machine scenarios (roofline/project) still need a placeholder.
    s.method.method = Method::FFT;
    s.method.N = 0;
  }
  return s;
}

std::vector<Violation> validate_outputs(const Scenario& s) {
  std::vector<Violation> out;
  bool has_method = s.method.N >= 1;
  for (const auto& sel : s.outputs) {
    if (sel == "energy" && !s.energy)
      out.push_back({"outputs", "selector 'energy' requires an energy section"});
    if (sel == "resilience" && !s.resilience)
      out.push_back({"outputs", "selector 'resilience' requires a resilience section"});
    if ((sel == "cost" || sel == "resilience") && !has_method)
      out.push_back({"outputs", "selector '" + sel + "' requires a method section"});
    if (sel == "project" && s.doubling_times.empty())
      out.push_back({"outputs", "selector 'project' requires a doubling_times section"});
    static const char* known[] = {"cost", "roofline", "energy", "project", "resilience"};
    if (std::find(std::begin(known), std::end(known), sel) == std::end(known))
      out.push_back({"outputs", "unknown selector '" + sel + "'"});
  }
  return out;
}

}  // namespace exaperf
