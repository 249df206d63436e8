#pragma once

#include <string>
#include <vector>

#include "exaperf/machine.hpp"

namespace exaperf {

// One network exchange in a hierarchical method. `scope` distinguishes
// the far-field hierarchy ("global"/"local") from the leaf-level
// near-field exchange ("leaf"); multigrid levels use "level".
struct LevelCost {
  std::string scope;
  int level = 0;
  double msgs = 0.0;
  double net_bytes = 0.0;
  double t_net = 0.0;
};

// Per-phase FLOP/byte/message counts and the times they imply. The time
// fields always satisfy t_comp = n_flop * flop_time, t_mem =
// n_mem_bytes * beta_mem, t_net = msgs*alpha + net_bytes*beta_link
// (summed per level where levels exist).
struct CostBreakdown {
  std::string phase;
  double n_flop = 0.0;
  double n_mem_bytes = 0.0;
  double msgs = 0.0;
  double net_bytes = 0.0;
  double t_comp = 0.0;
  double t_mem = 0.0;
  double t_net = 0.0;
  double t_pcie = 0.0;
  std::vector<LevelCost> per_level;
};

enum class Overlap { Sum, Max };

// M2L translation work per target box as a function of expansion order.
double expansion_flops(Expansion e, double k);
// Default per-box payload (elements) sent for one translated expansion.
double expansion_coeff_elems(Expansion e, double k);

// Pencil-decomposed 3-D FFT: three 1-D sweeps, two all-to-alls. The
// torus variant charges the transpose at the bisection bandwidth.
CostBreakdown fft_cost(const MachineSpec& m, const MethodConfig& c);

// FMM near-field (leaf-level halo) and far-field (per-level M2L)
// phases. The closed forms treat N/P as the per-node box volume and
// evaluate continuously for sizes that are not exact powers of eight.
CostBreakdown fmm_p2p_cost(const MachineSpec& m, const MethodConfig& c);
CostBreakdown fmm_m2l_cost(const MachineSpec& m, const MethodConfig& c);

// Geometric multigrid V-cycle: eta-weighted 7-point smoother sweeps over
// the level hierarchy, six-neighbor halo exchanges per level. Totals are
// per V-cycle; mg_full_solve multiplies by mg_iterations().
CostBreakdown mg_cost(const MachineSpec& m, const MethodConfig& c);

// ((kappa-1)/kappa)^mu, usable as mg_rho.
double mg_convergence_bound(double kappa, double mu);
// ceil(log eps / log rho) V-cycles to reach tolerance eps.
double mg_iterations(double epsilon, double rho);

// Two-way host<->device staging of the node's share.
double pcie_cost(const MachineSpec& m, const MethodConfig& c);

double total_time(const CostBreakdown& cb, Overlap overlap);

// All phases of the configured method, plus a summed "total" entry
// (last). PCIe staging is attached to the total when beta_pcie > 0.
std::vector<CostBreakdown> method_cost(const MachineSpec& m, const MethodConfig& c);

}  // namespace exaperf
