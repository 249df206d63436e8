#pragma once

#include <string>
#include <vector>

#include "exaperf/kernels.hpp"
#include "exaperf/machine.hpp"

namespace exaperf {

struct StructureDvf {
  std::string structure;
  double size_mbit = 0.0;   // S_d
  double accesses = 0.0;    // N_ha, main-memory access count
  double dvf = 0.0;
};

struct KernelCvf {
  std::string kernel;
  std::vector<std::pair<std::string, double>> per_level;  // (label, cvf)
  double cvf = 0.0;
};

// Exposure indices for one scenario. Totals equal the sum of their
// parts; all factors are reported as dimensionless indices.
struct VulnerabilityReport {
  std::string method;
  std::vector<StructureDvf> per_structure;
  double dvf_total = 0.0;
  std::vector<KernelCvf> per_kernel;
  double cvf_total = 0.0;
};

// Literal product FIT * T_exe * S_d * N_ha with T_exe in hours and S_d
// in Mbit (decimal megabits).
double dvf(const ResilienceParams& r, double t_exe_hours, double s_d_mbit, double n_ha);

// Network diameter used as the average route length h_bar: 1 on a fully
// connected fabric, 3*floor(P^(1/3)/2) on a 3-D torus (at least 1 for
// P >= 2; 0 for a single node).
double network_diameter(Topology topology, double P);

// RF_n = h_bar * p_e + b*p_b^2 with p_e = a*p_a + 2b*p_b - b*p_b^2
// clamped to [0,1].
double network_resilience_factor(const ResilienceParams& r, double h_bar);

// Per-kernel CVF = m * T_net * RF_n, summed per level for hierarchical
// methods. `phases` is the method_cost output minus its total entry.
std::vector<KernelCvf> cvf(const std::vector<CostBreakdown>& phases,
                           const ResilienceParams& r, const MachineSpec& m,
                           const MethodConfig& c);

VulnerabilityReport vulnerability_report(const MachineSpec& m, const MethodConfig& c,
                                         const ResilienceParams& r,
                                         Overlap overlap = Overlap::Sum);

}  // namespace exaperf
