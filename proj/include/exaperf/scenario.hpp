#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exaperf/kernels.hpp"
#include "exaperf/machine.hpp"

namespace exaperf {

// A fully resolved run: machine + method, with optional energy and
// resilience sections and the report selectors to emit.
struct Scenario {
  MachineSpec machine;
  MethodConfig method;
  std::optional<EnergyParams> energy;
  std::optional<ResilienceParams> resilience;
  std::map<std::string, double> doubling_times;
  Overlap overlap = Overlap::Sum;
  std::vector<std::string> outputs;
  std::vector<std::string> source_files;
};

// Merges the top-level sections (machine, method, energy, resilience,
// doubling_times, outputs) found across the given files. A section
// appearing in two files is an error; a machine section is required.
Scenario load_scenario(const std::vector<std::string>& paths);

// Violations that selectors would trip over (e.g. an energy report
// without an energy section), appended to validate_scenario findings.
std::vector<Violation> validate_outputs(const Scenario& s);

}  // namespace exaperf
