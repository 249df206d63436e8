#include "exaperf/resilience.hpp"

#include <algorithm>
#include <cmath>

#include "exaperf/errors.hpp"

namespace exaperf {

namespace {

constexpr double kBitsPerMbit = 1e6;
constexpr double kSecondsPerHour = 3600.0;

double to_mbit(double bytes) { return bytes * 8.0 / kBitsPerMbit; }

// Boxes per node across all local levels, counting N/P as the leaf-level
// box volume like the cost formulas do.
double local_tree_boxes(double n_per_node) {
  double boxes = 0;
  for (double level = n_per_node; level >= 1; level /= 8.0) boxes += level;
  return boxes;
}

}  // namespace

double dvf(const ResilienceParams& r, double t_exe_hours, double s_d_mbit, double n_ha) {
  return r.fit * t_exe_hours * s_d_mbit * n_ha;
}

double network_diameter(Topology topology, double P) {
  if (P <= 1) return 0.0;
  if (topology == Topology::FullyConnected) return 1.0;
  return std::max(1.0, 3.0 * std::floor(std::cbrt(P) / 2.0));
}

double network_resilience_factor(const ResilienceParams& r, double h_bar) {
  double p_e = r.a * r.p_a + 2.0 * r.b * r.p_b - r.b * r.p_b * r.p_b;
  p_e = std::clamp(p_e, 0.0, 1.0);
  return h_bar * p_e + r.b * r.p_b * r.p_b;
}

std::vector<KernelCvf> cvf(const std::vector<CostBreakdown>& phases,
                           const ResilienceParams& r, const MachineSpec& m,
                           const MethodConfig& c) {
  double h_bar = r.h_bar_override ? *r.h_bar_override
                                  : network_diameter(m.topology, resolve_p(m, c));
  double rf = network_resilience_factor(r, h_bar);

  std::vector<KernelCvf> kernels;
  for (const auto& phase : phases) {
    if (phase.phase == "total") continue;
    if (phase.per_level.empty()) {
      if (c.method != Method::FFT && phase.msgs > 0)
        throw ModelError(ModelError::Kind::MissingLevels,
                         phase.phase + ": hierarchical method without per-level data");
      KernelCvf k;
      k.kernel = phase.phase;
      k.cvf = phase.msgs * phase.t_net * rf;
      kernels.push_back(std::move(k));
      continue;
    }
    // Hierarchical phases may mix scopes (global/local M2L); each scope
    // reports as its own kernel.
    auto find = [&kernels](const std::string& name) -> KernelCvf& {
      for (auto& k : kernels)
        if (k.kernel == name) return k;
      kernels.push_back({name, {}, 0.0});
      return kernels.back();
    };
    // m is the per-exchange message count (6-neighbor halo for MG,
    // 26 neighbors for FMM); t_net already covers all iterations.
    double m_per_exchange = c.method == Method::MG ? 6.0 : 26.0;
    for (const auto& lvl : phase.per_level) {
      std::string name = phase.phase;
      if (lvl.scope == "global" || lvl.scope == "local") name += "_" + lvl.scope;
      KernelCvf& k = find(name);
      double v = (lvl.msgs > 0 ? m_per_exchange : 0.0) * lvl.t_net * rf;
      k.per_level.emplace_back(lvl.scope + ":" + std::to_string(lvl.level), v);
      k.cvf += v;
    }
  }
  return kernels;
}

VulnerabilityReport vulnerability_report(const MachineSpec& m, const MethodConfig& c,
                                         const ResilienceParams& r, Overlap overlap) {
  VulnerabilityReport rep;
  rep.method = to_string(c.method);
  std::vector<CostBreakdown> phases = method_cost(m, c);
  const CostBreakdown& total = phases.back();
  double t_exe_h = total_time(total, overlap) / kSecondsPerHour;
  double es = resolve_element_size(m, c);
  double n_per = resolve_n(m, c) / resolve_p(m, c);

  auto add = [&](const std::string& name, double bytes, double accesses) {
    StructureDvf s;
    s.structure = name;
    s.size_mbit = to_mbit(bytes);
    s.accesses = accesses;
    s.dvf = dvf(r, t_exe_h, s.size_mbit, s.accesses);
    rep.per_structure.push_back(s);
    rep.dvf_total += s.dvf;
  };

  switch (c.method) {
    case Method::FFT: {
      // Single pencil-decomposed array; all misses belong to it.
      add("pencil_array", n_per * es, total.n_mem_bytes / m.L);
      break;
    }
    case Method::FMM: {
      const CostBreakdown& p2p = phases[0];
      const CostBreakdown& m2l = phases[1];
      double k = c.fmm_k.value_or(1.0);
      Expansion exp = c.fmm_expansion.value_or(Expansion::EquivalentChargesFFT);
      double coeff_bytes = es * (c.fmm_coeff_elems ? *c.fmm_coeff_elems
                                                   : expansion_coeff_elems(exp, k));
      double boxes = local_tree_boxes(n_per);
      // Bodies carry coordinates and values (the P2P payload convention).
      add("bodies", 4.0 * n_per * es, p2p.n_mem_bytes / m.L);
      add("coefficients", boxes * coeff_bytes, m2l.n_mem_bytes / m.L);
      // One descriptor touch per box per phase.
      add("local_tree", boxes * es, 2.0 * boxes * es / m.L);
      break;
    }
    case Method::MG: {
      // All level grids held by one node: the active levels plus one
      // element per coarser level of the global hierarchy.
      double g3 = std::pow(c.mg_gamma.value_or(2.0), 3.0);
      double n_total = resolve_n(m, c);
      double elems = 0;
      int active = -1;
      for (double level = n_per; level >= 1.0 - 1e-12; level /= g3) {
        elems += level;
        ++active;
      }
      int deepest = active;
      for (double level = n_per * g3; level <= n_total * (1 + 1e-12); level *= g3) ++deepest;
      elems += deepest - active;
      add("level_grids", elems * es, total.n_mem_bytes / m.L);
      break;
    }
  }

  rep.per_kernel = cvf(std::vector<CostBreakdown>(phases.begin(), phases.end() - 1), r, m, c);
  for (const auto& k : rep.per_kernel) rep.cvf_total += k.cvf;
  return rep;
}

}  // namespace exaperf
