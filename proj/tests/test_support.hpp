#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "exaperf/machine.hpp"

namespace testsup {

inline std::string configs_dir() {
  const char* env = std::getenv("EXAPERF_CONFIGS");
  return env ? env : "configs";
}

inline std::string config(const std::string& rel) { return configs_dir() + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// All-ones testing machine matching configs/machines/unit.json.
inline exaperf::MachineSpec unit_machine() {
  exaperf::MachineSpec m;
  m.name = "unit";
  m.t_c = 1.0;
  m.beta_mem = 1.0;
  m.beta_link = 1.0;
  m.alpha = 1.0;
  m.Z = 1e6;
  m.L = 1.0;
  m.cores = 1.0;
  m.P = 1.0;
  m.element_size = 1.0;
  m.topology = exaperf::Topology::FullyConnected;
  return m;
}

inline exaperf::MachineSpec cpu2015() {
  exaperf::MachineSpec m;
  m.name = "cpu2015";
  m.cores = 16;
  m.t_c = 16 / 588.8e9;
  m.beta_mem = 1 / 68e9;
  m.beta_link = 1 / 10e9;
  m.alpha = 1e-6;
  m.Z = 40e6;
  m.L = 64;
  m.P = 11889;
  m.element_size = 8;
  m.topology = exaperf::Topology::Torus3D;
  return m;
}

}  // namespace testsup
