#include "exaperf/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "exaperf/errors.hpp"

namespace exaperf {

namespace {

// Largest integer l with base^l <= x, tolerant of x sitting a few ulps
// below an exact power.
int ilog_floor(double x, double base) {
  if (x < 1) return -1;
  int l = 0;
  double p = base;
  while (p <= x * (1 + 1e-12)) { p *= base; ++l; }
  return l;
}

// Smallest integer s with s^3 >= x (up to rounding slack), i.e. the
// ceil of the cube root that does not overshoot exact cubes.
double icbrt_ceil(double x) {
  double s = std::round(std::cbrt(x));
  if (s * s * s >= x - 0.5 * std::max(1.0, 1e-12 * x)) return s;
  return s + 1;
}

double require_positive(double v, const char* what, ModelError::Kind kind) {
  if (!(v > 0) || !std::isfinite(v))
    throw ModelError(kind, std::string(what) + " must be positive");
  return v;
}

void fill_times(CostBreakdown& cb, const MachineSpec& m) {
  cb.t_comp = cb.n_flop * m.flop_time();
  cb.t_mem = cb.n_mem_bytes * m.beta_mem;
  if (cb.per_level.empty()) {
    cb.t_net = cb.msgs * m.alpha + cb.net_bytes * m.beta_link;
  } else {
    cb.msgs = 0;
    cb.net_bytes = 0;
    cb.t_net = 0;
    for (auto& l : cb.per_level) {
      l.t_net = l.msgs * m.alpha + l.net_bytes * m.beta_link;
      cb.msgs += l.msgs;
      cb.net_bytes += l.net_bytes;
      cb.t_net += l.t_net;
    }
  }
}

}  // namespace

double expansion_flops(Expansion e, double k) {
  double k2 = k * k, k3 = k2 * k;
  switch (e) {
    case Expansion::CartesianTaylor:
    case Expansion::CartesianChebyshev: return k3 * k3;
    case Expansion::SphericalHarmonics: return k2 * k2;
    case Expansion::SphericalRotation: return k3;
    case Expansion::SphericalFFT: {
      double lg = std::log2(k);
      return k2 * lg * lg;
    }
    case Expansion::Planewave: return k3;
    case Expansion::EquivalentCharges: return k2 * k2;
    case Expansion::EquivalentChargesFFT: return k3 * std::log2(k);
  }
  return 0;
}

double expansion_coeff_elems(Expansion e, double k) {
  switch (e) {
    case Expansion::CartesianTaylor:
    case Expansion::CartesianChebyshev: return k * (k + 1) * (k + 2) / 6.0;
    case Expansion::SphericalHarmonics:
    case Expansion::SphericalRotation:
    case Expansion::SphericalFFT: return k * k;
    case Expansion::Planewave:
    case Expansion::EquivalentCharges:
    case Expansion::EquivalentChargesFFT: return k * k * k;
  }
  return 0;
}

CostBreakdown fft_cost(const MachineSpec& m, const MethodConfig& c) {
  double N = resolve_n(m, c);
  double P = resolve_p(m, c);
  require_positive(N, "fft N", ModelError::Kind::NotACube);
  if (P > std::pow(N, 2.0 / 3.0) * (1 + 1e-12))
    throw ModelError(ModelError::Kind::InfeasibleDecomposition,
                     "fft: P exceeds N^(2/3), pencil decomposition infeasible");
  double es = resolve_element_size(m, c);
  double cbrt_n = std::cbrt(N);
  double log2_cbrt = std::log2(N) / 3.0;

  CostBreakdown cb;
  cb.phase = "fft";
  cb.n_flop = 3.0 * 5.0 * N * log2_cbrt / P;
  double z_elems = m.Z / es;
  // Theta(1 + ...) constant region: never fewer misses than one pass.
  double log_z = std::max(1.0, std::log(cbrt_n) / std::log(z_elems));
  cb.n_mem_bytes = es * 3.0 * N * log_z / P;
  if (P > 1) {
    cb.msgs = 2.0 * std::sqrt(P);
    double denom = (m.topology == Topology::Torus3D) ? std::pow(P, 2.0 / 3.0) : P;
    cb.net_bytes = es * 2.0 * N / denom;
  }
  fill_times(cb, m);
  return cb;
}

CostBreakdown fmm_p2p_cost(const MachineSpec& m, const MethodConfig& c) {
  double N = resolve_n(m, c);
  double P = resolve_p(m, c);
  if (!c.fmm_q || !(*c.fmm_q >= 1))
    throw ModelError(ModelError::Kind::InvalidTree, "fmm: q must be >= 1");
  double q = *c.fmm_q;
  require_positive(N, "fmm N", ModelError::Kind::InvalidTree);
  double es = resolve_element_size(m, c);
  double n_per = N / P;
  double l_elems = m.L / es;
  double z_elems = m.Z / es;

  CostBreakdown cb;
  cb.phase = "fmm_p2p";
  cb.n_flop = c.fmm_flops_per_interaction * 27.0 * q * n_per;
  cb.n_mem_bytes =
      es * (n_per + n_per * l_elems / (std::cbrt(z_elems) * std::pow(q, 2.0 / 3.0)));
  if (P > 1) {
    double side = icbrt_ceil(n_per);
    double halo_boxes = (side + 2) * (side + 2) * (side + 2) - n_per;
    // Coordinates and values of every point in a box travel: factor 4.
    LevelCost leaf;
    leaf.scope = "leaf";
    leaf.level = std::max(0, ilog_floor(n_per, 8.0));
    leaf.msgs = 26;
    leaf.net_bytes = es * 4.0 * q * halo_boxes;
    cb.per_level.push_back(leaf);
  }
  fill_times(cb, m);
  return cb;
}

CostBreakdown fmm_m2l_cost(const MachineSpec& m, const MethodConfig& c) {
  double N = resolve_n(m, c);
  double P = resolve_p(m, c);
  if (!c.fmm_q || !(*c.fmm_q >= 1) || !c.fmm_k || !(*c.fmm_k >= 1))
    throw ModelError(ModelError::Kind::InvalidTree, "fmm: q and k must be >= 1");
  double q = *c.fmm_q;
  double k = *c.fmm_k;
  require_positive(N, "fmm N", ModelError::Kind::InvalidTree);
  double es = resolve_element_size(m, c);
  Expansion exp = c.fmm_expansion.value_or(Expansion::EquivalentChargesFFT);
  FmmVariant variant = c.fmm_variant.value_or(FmmVariant::KIFMM);
  double n_per = N / P;
  double k3 = k * k * k;

  CostBreakdown cb;
  cb.phase = "fmm_m2l";
  if (variant == FmmVariant::KIFMM) {
    cb.n_flop = (k3 * std::log2(k) + 189.0 * k3) * n_per / q;
  } else {
    cb.n_flop = 189.0 * k3 * k3 * n_per / q;
  }

  double f_k = expansion_flops(exp, k);
  double z_elems = m.Z / es;
  // All 316 translation operators live in cache for the duration.
  double z_eff = z_elems - 316.0 * f_k;
  if (!(z_eff > 0))
    throw ModelError(ModelError::Kind::CacheOverflow,
                     "fmm: 316 cached M2L operators exceed fast memory");
  double l_elems = m.L / es;
  cb.n_mem_bytes = es * (n_per * f_k / q +
                         n_per * std::cbrt(f_k) * l_elems / (q * std::cbrt(z_eff)));

  double coeff_bytes = es * (c.fmm_coeff_elems ? *c.fmm_coeff_elems
                                               : expansion_coeff_elems(exp, k));
  if (P > 1) {
    int global_levels = ilog_floor(P, 8.0);
    for (int g = 1; g <= global_levels; ++g) {
      LevelCost lc;
      lc.scope = "global";
      lc.level = g;
      lc.msgs = 26;
      lc.net_bytes = 26.0 * 8.0 * coeff_bytes;
      cb.per_level.push_back(lc);
    }
    int local_levels = ilog_floor(n_per, 8.0);
    for (int i = 1; i <= local_levels; ++i) {
      double side = std::exp2(i);
      double boxes = (side + 4) * (side + 4) * (side + 4) - std::pow(8.0, i);
      LevelCost lc;
      lc.scope = "local";
      lc.level = i;
      lc.msgs = 26;
      lc.net_bytes = boxes * coeff_bytes;
      cb.per_level.push_back(lc);
    }
  }
  fill_times(cb, m);
  return cb;
}

CostBreakdown mg_cost(const MachineSpec& m, const MethodConfig& c) {
  double N = resolve_n(m, c);
  double P = resolve_p(m, c);
  require_positive(N, "mg N", ModelError::Kind::NotACube);
  if (!c.mg_gamma || !c.mg_eta)
    throw ModelError(ModelError::Kind::InvalidTree, "mg: gamma and eta must be set");
  double gamma = *c.mg_gamma;
  double eta = *c.mg_eta;
  if (!(gamma >= 2))
    throw ModelError(ModelError::Kind::InvalidTree, "mg: gamma must be >= 2");
  double es = resolve_element_size(m, c);
  double g3 = gamma * gamma * gamma;

  // Fine levels keep every node busy; past log_{gamma^3}(N/P) each node
  // holds a single point until the global hierarchy bottoms out.
  int active = ilog_floor(N / P, g3);
  int deepest = ilog_floor(N, g3);
  double sum = 0;
  double level_n = N / P;
  for (int i = 0; i <= active; ++i) { sum += level_n; level_n /= g3; }
  sum += std::max(0, deepest - active);

  CostBreakdown cb;
  cb.phase = "mg";
  cb.n_flop = 7.0 * eta * sum;
  double l_elems = m.L / es;
  double z_elems = m.Z / es;
  cb.n_mem_bytes = es * cb.n_flop * l_elems / std::cbrt(z_elems);

  double area = std::pow(N / P, 2.0 / 3.0);
  for (int l = 0; l <= deepest; ++l) {
    LevelCost lc;
    lc.scope = "level";
    lc.level = l;
    lc.msgs = P > 1 ? 6 : 0;
    // Clamped at one element; the closed form dips below an element on
    // coarse levels.
    lc.net_bytes = P > 1 ? es * std::max(1.0, 6.0 * area / std::pow(gamma, 2.0 * l)) : 0;
    cb.per_level.push_back(lc);
  }

  double iterations = 1.0;
  if (c.mg_full_solve) {
    double rho;
    if (c.mg_rho) rho = *c.mg_rho;
    else if (c.mg_kappa && c.mg_mu) rho = mg_convergence_bound(*c.mg_kappa, *c.mg_mu);
    else throw ModelError(ModelError::Kind::InvalidRate, "mg: full solve needs rho or kappa+mu");
    if (!(rho > 0 && rho < 1))
      throw ModelError(ModelError::Kind::InvalidRate, "mg: rho must lie in (0,1)");
    if (!c.mg_epsilon || !(*c.mg_epsilon > 0 && *c.mg_epsilon < 1))
      throw ModelError(ModelError::Kind::InvalidRate, "mg: epsilon must lie in (0,1)");
    iterations = mg_iterations(*c.mg_epsilon, rho);
    cb.n_flop *= iterations;
    cb.n_mem_bytes *= iterations;
    for (auto& lc : cb.per_level) {
      lc.msgs *= iterations;
      lc.net_bytes *= iterations;
    }
  }
  fill_times(cb, m);
  return cb;
}

double mg_convergence_bound(double kappa, double mu) {
  if (!(kappa > 1))
    throw ModelError(ModelError::Kind::InvalidKappa, "mg: kappa must exceed 1");
  if (!(mu >= 1))
    throw ModelError(ModelError::Kind::InvalidKappa, "mg: mu must be >= 1");
  return std::pow((kappa - 1.0) / kappa, mu);
}

double mg_iterations(double epsilon, double rho) {
  if (!(rho > 0 && rho < 1))
    throw ModelError(ModelError::Kind::InvalidRate, "mg: rho must lie in (0,1)");
  if (!(epsilon > 0 && epsilon < 1))
    throw ModelError(ModelError::Kind::InvalidRate, "mg: epsilon must lie in (0,1)");
  return std::ceil(std::log(epsilon) / std::log(rho));
}

double pcie_cost(const MachineSpec& m, const MethodConfig& c) {
  if (m.beta_pcie == 0) return 0.0;
  double N = resolve_n(m, c);
  double P = resolve_p(m, c);
  double es = resolve_element_size(m, c);
  // Factor two: the transfer goes both ways.
  return 2.0 * (N / P) * es * m.beta_pcie;
}

double total_time(const CostBreakdown& cb, Overlap overlap) {
  double cm = overlap == Overlap::Max ? std::max(cb.t_comp, cb.t_mem)
                                      : cb.t_comp + cb.t_mem;
  return cm + cb.t_net + cb.t_pcie;
}

std::vector<CostBreakdown> method_cost(const MachineSpec& m, const MethodConfig& c) {
  std::vector<CostBreakdown> phases;
  switch (c.method) {
    case Method::FFT:
      phases.push_back(fft_cost(m, c));
      break;
    case Method::FMM:
      phases.push_back(fmm_p2p_cost(m, c));
      phases.push_back(fmm_m2l_cost(m, c));
      break;
    case Method::MG:
      phases.push_back(mg_cost(m, c));
      break;
  }
  CostBreakdown total;
  total.phase = "total";
  for (const auto& p : phases) {
    total.n_flop += p.n_flop;
    total.n_mem_bytes += p.n_mem_bytes;
    total.msgs += p.msgs;
    total.net_bytes += p.net_bytes;
    total.t_comp += p.t_comp;
    total.t_mem += p.t_mem;
    total.t_net += p.t_net;
  }
  total.t_pcie = pcie_cost(m, c);
  phases.push_back(total);
  return phases;
}

}  // namespace exaperf
