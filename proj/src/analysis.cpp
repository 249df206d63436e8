#include "exaperf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "exaperf/errors.hpp"
#include "exaperf/units.hpp"

namespace exaperf {

using nlohmann::json;

const std::vector<TechNode>& tech_nodes() {
  static const std::vector<TechNode> nodes = {
      {45, 1.00, 1.00, 1.00, 1.00},
      {32, 1.10, 0.93, 0.75, 0.71},
      {22, 1.19, 0.88, 0.56, 0.52},
      {16, 1.25, 0.86, 0.42, 0.39},
      {11, 1.30, 0.84, 0.32, 0.29},
      {8, 1.34, 0.84, 0.24, 0.22},
  };
  return nodes;
}

const TechNode& tech_node(double size_nm) {
  for (const auto& n : tech_nodes()) {
    if (n.size_nm == size_nm) return n;
  }
  throw ModelError(ModelError::Kind::UnknownNode,
                   "no built-in technology node of size " + format_g9(size_nm) + " nm");
}

double balance_point(const MachineSpec& m) {
  return m.peak_flops() / m.mem_bandwidth();
}

RooflinePoint roofline(const MachineSpec& m, double ai) {
  RooflinePoint p;
  p.ai = ai;
  double peak = m.peak_flops();
  // Branch on the ridge so the plateau is met exactly there.
  p.attainable = ai >= balance_point(m) ? peak : m.mem_bandwidth() * ai;
  return p;
}

double balance_time(const MachineSpec& m, double n_flop, double ai) {
  return n_flop * m.flop_time() * std::max(1.0, balance_point(m) / ai);
}

double energy(const EnergyParams& e, double n_flop, double n_mem_bytes, double t_exe) {
  return n_flop * e.eps_flop + n_mem_bytes * e.eps_mem + e.pi0 * t_exe;
}

double energy_roofline(const EnergyParams& e, const MachineSpec& m, double ai) {
  double t_per_flop = m.flop_time() * std::max(1.0, balance_point(m) / ai);
  return e.eps_flop + e.eps_mem / ai + e.pi0 * t_per_flop;
}

std::vector<std::pair<MemoryTier, double>> memory_aware_roofline(
    const std::vector<MemoryTier>& tiers, double peak, double ai) {
  std::vector<std::pair<MemoryTier, double>> out;
  out.reserve(tiers.size());
  for (const auto& t : tiers) {
    out.emplace_back(t, std::min(peak, t.bandwidth * ai));
  }
  return out;
}

std::pair<EnergyParams, MachineSpec> scale_energy_params(const EnergyParams& e,
                                                         const MachineSpec& m,
                                                         const TechNode& from,
                                                         const TechNode& to) {
  double power = to.power_ratio / from.power_ratio;
  double freq = to.freq_ratio / from.freq_ratio;
  EnergyParams se = e;
  se.eps_flop = e.eps_flop * power / freq;
  se.eps_mem = e.eps_mem * power / freq;
  // pi0 untouched: only dynamic power scales here.
  MachineSpec sm = m;
  sm.t_c = m.t_c / freq;
  sm.beta_mem = m.beta_mem / freq;
  return {se, sm};
}

double kernel_ai(const CostBreakdown& cb) {
  if (cb.n_mem_bytes <= 0)
    throw ModelError(ModelError::Kind::ZeroTraffic, "AI undefined: no memory traffic");
  return cb.n_flop / cb.n_mem_bytes;
}

std::vector<double> ai_samples(double lo, double hi, int points) {
  std::vector<double> out;
  if (points <= 1 || lo == hi) {
    out.push_back(lo);
    return out;
  }
  double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) out.push_back(lo * std::exp(step * i));
  out.back() = hi;  // exact endpoint regardless of rounding drift
  return out;
}

std::vector<MemoryTier> load_tiers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path, e.what());
  }
  if (!j.contains("tiers") || !j.at("tiers").is_array())
    throw parse_error(path, "missing top-level 'tiers' array");
  std::vector<MemoryTier> tiers;
  for (const auto& jt : j.at("tiers")) {
    MemoryTier t;
    t.name = jt.at("name").get<std::string>();
    auto q = [&](const char* key) {
      const json& v = jt.at(key);
      if (v.is_number()) return v.get<double>();
      return parse_quantity(v.get<std::string>(), key).value;
    };
    t.bandwidth = q("bandwidth");
    t.capacity = q("capacity");
    if (!(t.bandwidth > 0) || !(t.capacity > 0))
      throw validation_error(t.name, "tier bandwidth and capacity must be positive");
    tiers.push_back(t);
  }
  return tiers;
}

}  // namespace exaperf
