#pragma once

#include <string>
#include <utility>
#include <vector>

#include "exaperf/kernels.hpp"
#include "exaperf/machine.hpp"

namespace exaperf {

struct RooflinePoint {
  double ai = 0.0;          // FLOPs per byte
  double attainable = 0.0;  // FLOP/s
};

struct MemoryTier {
  std::string name;
  double bandwidth = 0.0;  // B/s
  double capacity = 0.0;   // bytes
};

// One row of the transistor-scaling table; ratios are relative to the
// 45 nm node.
struct TechNode {
  double size_nm = 0.0;
  double freq_ratio = 1.0;
  double voltage_ratio = 1.0;
  double capacitance_ratio = 1.0;
  double power_ratio = 1.0;
};

// The built-in node set (45 down to 8 nm).
const std::vector<TechNode>& tech_nodes();
// Throws ModelError{UnknownNode} for sizes outside the built-in set.
const TechNode& tech_node(double size_nm);

// Machine balance point: the AI at which the memory-bandwidth line meets
// the compute plateau, in FLOPs per byte.
double balance_point(const MachineSpec& m);

// attainable = min(peak, sustained bandwidth * ai).
RooflinePoint roofline(const MachineSpec& m, double ai);

// Balance-principle execution time: n_flop * flop_time * max(1, B_tau/ai).
double balance_time(const MachineSpec& m, double n_flop, double ai);

// E = n_flop*eps_flop + n_mem_bytes*eps_mem + pi0*t_exe.
double energy(const EnergyParams& e, double n_flop, double n_mem_bytes, double t_exe);

// Joules per FLOP at a given intensity, with the execution time taken
// from the balance principle on machine m.
double energy_roofline(const EnergyParams& e, const MachineSpec& m, double ai);

std::vector<std::pair<MemoryTier, double>> memory_aware_roofline(
    const std::vector<MemoryTier>& tiers, double peak, double ai);

// Rescales dynamic energy/time constants between technology nodes:
// dynamic power by the power-ratio quotient, t_c and beta_mem by the
// inverse frequency quotient, eps_* by their product. pi0 is left alone.
std::pair<EnergyParams, MachineSpec> scale_energy_params(const EnergyParams& e,
                                                         const MachineSpec& m,
                                                         const TechNode& from,
                                                         const TechNode& to);

// AI = n_flop / n_mem_bytes. Throws ZeroTraffic when no bytes moved.
double kernel_ai(const CostBreakdown& cb);

// Log-uniform AI samples, endpoints included.
std::vector<double> ai_samples(double lo, double hi, int points);

std::vector<MemoryTier> load_tiers(const std::string& path);

}  // namespace exaperf
