#include "exaperf/machine.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exaperf/errors.hpp"
#include "exaperf/units.hpp"

namespace exaperf {

using nlohmann::json;

const char* to_string(Topology t) {
  return t == Topology::Torus3D ? "torus3d" : "fully_connected";
}
const char* to_string(Method m) {
  switch (m) {
    case Method::FFT: return "fft";
    case Method::FMM: return "fmm";
    case Method::MG: return "mg";
  }
  return "?";
}
const char* to_string(FmmVariant v) {
  return v == FmmVariant::KIFMM ? "kifmm" : "exafmm";
}
const char* to_string(Expansion e) {
  switch (e) {
    case Expansion::CartesianTaylor: return "cartesian_taylor";
    case Expansion::CartesianChebyshev: return "cartesian_chebyshev";
    case Expansion::SphericalHarmonics: return "spherical_harmonics";
    case Expansion::SphericalRotation: return "spherical_rotation";
    case Expansion::SphericalFFT: return "spherical_fft";
    case Expansion::Planewave: return "planewave";
    case Expansion::EquivalentCharges: return "equivalent_charges";
    case Expansion::EquivalentChargesFFT: return "equivalent_charges_fft";
  }
  return "?";
}

namespace {

Topology parse_topology(const std::string& s, const std::string& where) {
  if (s == "fully_connected" || s == "full") return Topology::FullyConnected;
  if (s == "torus3d" || s == "torus") return Topology::Torus3D;
  throw parse_error(where, "unknown topology '" + s + "'");
}

// Numeric field in base SI, or a unit string. Rate-dimensioned strings
// (F/s, B/s) under an inverse-time key store the reciprocal, so machine
// files can quote spec-sheet bandwidths directly.
double read_time_per(const json& obj, const std::string& key, UnitDim rate_dim,
                     double divisor_for_rate) {
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw parse_error(key, "expected number or unit string");
  Quantity q = parse_quantity(v.get<std::string>(), key);
  if (q.dim == UnitDim::Seconds || q.dim == UnitDim::Scalar) return q.value;
  if (q.dim == rate_dim) {
    if (q.value <= 0) throw validation_error(key, "rate must be positive");
    return divisor_for_rate / q.value;
  }
  throw unit_error(key, "expected seconds or a rate");
}

double read_plain(const json& obj, const std::string& key, UnitDim expect) {
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw parse_error(key, "expected number or unit string");
  Quantity q = parse_quantity(v.get<std::string>(), key);
  if (q.dim != expect && q.dim != UnitDim::Scalar)
    throw unit_error(key, "unexpected unit for this field");
  return q.value;
}

bool near_integer(double x) { return std::fabs(x - std::round(x)) < 1e-9 * std::max(1.0, std::fabs(x)); }

bool is_power_of(double x, double base) {
  if (x < 1.0 - 1e-9) return false;
  double l = std::log(x) / std::log(base);
  double r = std::round(l);
  return std::fabs(std::pow(base, r) - x) <= 1e-6 * x;
}

bool is_perfect_cube(double x) {
  double s = std::round(std::cbrt(x));
  return s >= 1 && std::fabs(s * s * s - x) <= 1e-6 * std::max(1.0, x);
}

}  // namespace

MachineSpec machine_from_json(const json& jm) {
  MachineSpec m;
  if (jm.contains("name")) m.name = jm.at("name").get<std::string>();
  if (jm.contains("cores")) m.cores = read_plain(jm, "cores", UnitDim::Scalar);
  for (const char* req : {"t_c", "beta_mem", "beta_link", "Z", "L", "P"}) {
    if (!jm.contains(req)) throw validation_error(req, "required machine field missing");
  }
  // t_c given as a processor-peak rate means t_c = cores / peak.
  m.t_c = read_time_per(jm, "t_c", UnitDim::FlopRate, m.cores);
  m.beta_mem = read_time_per(jm, "beta_mem", UnitDim::ByteRate, 1.0);
  m.beta_link = read_time_per(jm, "beta_link", UnitDim::ByteRate, 1.0);
  if (jm.contains("beta_pcie")) m.beta_pcie = read_time_per(jm, "beta_pcie", UnitDim::ByteRate, 1.0);
  if (jm.contains("alpha")) m.alpha = read_plain(jm, "alpha", UnitDim::Seconds);
  m.Z = read_plain(jm, "Z", UnitDim::Bytes);
  m.L = read_plain(jm, "L", UnitDim::Bytes);
  m.P = read_plain(jm, "P", UnitDim::Scalar);
  if (jm.contains("element_size")) m.element_size = read_plain(jm, "element_size", UnitDim::Bytes);
  if (jm.contains("bandwidth_efficiency"))
    m.bandwidth_efficiency = read_plain(jm, "bandwidth_efficiency", UnitDim::Scalar);
  if (jm.contains("topology"))
    m.topology = parse_topology(jm.at("topology").get<std::string>(), "topology");

  auto bad = validate_machine(m);
  if (!bad.empty()) throw validation_error(bad.front().field, bad.front().message);
  return m;
}

MachineSpec load_machine_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(path, e.what());
  }
  if (!j.contains("machine")) throw parse_error(path, "missing top-level 'machine' object");
  try {
    return machine_from_json(j.at("machine"));
  } catch (const json::exception& e) {
    throw parse_error(path, e.what());
  }
}

std::string serialize_machine(const MachineSpec& m) {
  json jm;
  jm["name"] = m.name;
  // Raw strings keep doubles bit-exact through a reload.
  auto num = [](double v) { return json::parse(format_exact(v)); };
  jm["t_c"] = num(m.t_c);
  jm["beta_mem"] = num(m.beta_mem);
  jm["beta_link"] = num(m.beta_link);
  jm["alpha"] = num(m.alpha);
  jm["Z"] = num(m.Z);
  jm["L"] = num(m.L);
  jm["cores"] = num(m.cores);
  jm["P"] = num(m.P);
  jm["beta_pcie"] = num(m.beta_pcie);
  jm["element_size"] = num(m.element_size);
  jm["bandwidth_efficiency"] = num(m.bandwidth_efficiency);
  jm["topology"] = to_string(m.topology);
  json root;
  root["machine"] = jm;
  return root.dump(2) + "\n";
}

std::vector<Violation> validate_machine(const MachineSpec& m) {
  std::vector<Violation> out;
  auto req_pos = [&](double v, const char* f) {
    if (!(v > 0) || !std::isfinite(v)) out.push_back({f, std::string(f) + " must be strictly positive"});
  };
  req_pos(m.t_c, "t_c");
  req_pos(m.beta_mem, "beta_mem");
  req_pos(m.beta_link, "beta_link");
  req_pos(m.alpha, "alpha");
  req_pos(m.Z, "Z");
  req_pos(m.L, "L");
  req_pos(m.cores, "cores");
  if (m.beta_pcie < 0) out.push_back({"beta_pcie", "beta_pcie must be nonnegative"});
  if (!(m.P >= 1)) out.push_back({"P", "P must be >= 1"});
  if (m.L > m.Z) out.push_back({"L", "cache line L exceeds fast-memory capacity Z"});
  double es = m.element_size;
  if (es != 1 && es != 4 && es != 8 && es != 16)
    out.push_back({"element_size", "element_size must be one of 1, 4, 8, 16 bytes"});
  if (!(m.bandwidth_efficiency > 0 && m.bandwidth_efficiency <= 1))
    out.push_back({"bandwidth_efficiency", "bandwidth_efficiency must be in (0, 1]"});
  if (m.t_c > 0 && (!std::isfinite(m.peak_flops()) || m.peak_flops() <= 0))
    out.push_back({"t_c", "derived peak cores/t_c must be finite and positive"});
  return out;
}

std::vector<Violation> validate_scenario(const MachineSpec& m, const MethodConfig& c) {
  std::vector<Violation> out = validate_machine(m);
  double P = resolve_p(m, c);
  double N = resolve_n(m, c);
  // The grid-shape checks apply to the size the user actually declared:
  // a per-node size of 32^3 is a valid cube even when P makes the
  // global N irregular.
  double declared = c.n_is_per_node ? c.N : N;
  if (!(c.N >= 1)) out.push_back({"N", "N must be >= 1"});
  if (!(P >= 1)) out.push_back({"P", "node count must be >= 1"});
  switch (c.method) {
    case Method::FFT: {
      if (c.N >= 1 && !is_perfect_cube(declared))
        out.push_back({"N", "fft: N is not a perfect cube", true});
      if (P > std::pow(N, 2.0 / 3.0) * (1 + 1e-12))
        out.push_back({"P", "fft: P exceeds N^(2/3); pencil decomposition infeasible"});
      break;
    }
    case Method::FMM: {
      if (!c.fmm_k || !(*c.fmm_k >= 1))
        out.push_back({"fmm_k", "fmm: order of expansion k must be >= 1"});
      if (!c.fmm_q || !(*c.fmm_q >= 1)) {
        out.push_back({"fmm_q", "fmm: points per leaf box q must be >= 1"});
      } else {
        double q = *c.fmm_q;
        if (!near_integer(declared / q))
          out.push_back({"fmm_q", "fmm: N not divisible by fmm_q", true});
        if (!is_power_of(declared / q, 8.0))
          out.push_back({"fmm_q", "fmm: leaf count N/q not a power of 8", true});
      }
      if (P > 1 && !is_power_of(N / P, 8.0))
        out.push_back({"N", "fmm: per-node box count N/P not a power of 8", true});
      break;
    }
    case Method::MG: {
      if (c.N >= 1 && !is_perfect_cube(declared))
        out.push_back({"N", "mg: N is not a perfect cube", true});
      if (!c.mg_gamma || !(*c.mg_gamma >= 2))
        out.push_back({"mg_gamma", "mg: coarsening factor mg_gamma must be >= 2"});
      if (!c.mg_eta || !(*c.mg_eta >= 1))
        out.push_back({"mg_eta", "mg: smoothing steps mg_eta must be >= 1"});
      if (c.mg_rho && !(*c.mg_rho > 0 && *c.mg_rho < 1))
        out.push_back({"mg_rho", "mg: convergence rate mg_rho must lie in (0,1)"});
      if (c.mg_epsilon && !(*c.mg_epsilon > 0 && *c.mg_epsilon < 1))
        out.push_back({"mg_epsilon", "mg: tolerance mg_epsilon must lie in (0,1)"});
      if (c.mg_kappa && !(*c.mg_kappa > 1))
        out.push_back({"mg_kappa", "mg: condition number mg_kappa must exceed 1"});
      if (c.mg_mu && !(*c.mg_mu >= 1))
        out.push_back({"mg_mu", "mg: smoothing count mg_mu must be >= 1"});
      if (c.mg_full_solve && !(c.mg_rho || (c.mg_kappa && c.mg_mu)) )
        out.push_back({"mg_rho", "mg: full solve needs mg_rho or mg_kappa+mg_mu"});
      if (c.mg_full_solve && !c.mg_epsilon)
        out.push_back({"mg_epsilon", "mg: full solve needs mg_epsilon"});
      break;
    }
  }
  double es = resolve_element_size(m, c);
  if (es != 1 && es != 4 && es != 8 && es != 16)
    out.push_back({"element_size", "element_size must be one of 1, 4, 8, 16 bytes"});
  return out;
}

namespace {

Method parse_method(const std::string& s) {
  if (s == "fft" || s == "FFT") return Method::FFT;
  if (s == "fmm" || s == "FMM") return Method::FMM;
  if (s == "mg" || s == "MG" || s == "multigrid") return Method::MG;
  throw parse_error("method", "unknown method '" + s + "'");
}

Expansion parse_expansion(const std::string& s) {
  for (Expansion e : {Expansion::CartesianTaylor, Expansion::CartesianChebyshev,
                      Expansion::SphericalHarmonics, Expansion::SphericalRotation,
                      Expansion::SphericalFFT, Expansion::Planewave,
                      Expansion::EquivalentCharges, Expansion::EquivalentChargesFFT}) {
    if (s == to_string(e)) return e;
  }
  throw parse_error("fmm_expansion", "unknown expansion '" + s + "'");
}

double jnum(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_quantity(v.get<std::string>(), key).value;
  throw parse_error(key, "expected a number");
}

}  // namespace

MethodConfig method_from_json(const json& jm) {
  MethodConfig c;
  if (!jm.contains("method")) throw validation_error("method", "required method field missing");
  c.method = parse_method(jm.at("method").get<std::string>());
  if (jm.contains("N")) {
    c.N = jnum(jm, "N");
  } else if (jm.contains("n_per_node")) {
    c.N = jnum(jm, "n_per_node");
    c.n_is_per_node = true;
  } else {
    throw validation_error("N", "required field missing (N or n_per_node)");
  }
  if (jm.contains("P")) c.P_override = jnum(jm, "P");
  if (jm.contains("element_size")) c.element_size = jnum(jm, "element_size");
  if (jm.contains("fmm_q")) c.fmm_q = jnum(jm, "fmm_q");
  if (jm.contains("fmm_k")) c.fmm_k = jnum(jm, "fmm_k");
  if (jm.contains("fmm_expansion"))
    c.fmm_expansion = parse_expansion(jm.at("fmm_expansion").get<std::string>());
  if (jm.contains("fmm_variant")) {
    std::string v = jm.at("fmm_variant").get<std::string>();
    if (v == "kifmm") c.fmm_variant = FmmVariant::KIFMM;
    else if (v == "exafmm") c.fmm_variant = FmmVariant::ExaFMM;
    else throw parse_error("fmm_variant", "unknown variant '" + v + "'");
  }
  if (jm.contains("fmm_flops_per_interaction"))
    c.fmm_flops_per_interaction = jnum(jm, "fmm_flops_per_interaction");
  if (jm.contains("fmm_coeff_elems")) c.fmm_coeff_elems = jnum(jm, "fmm_coeff_elems");
  if (jm.contains("mg_gamma")) c.mg_gamma = jnum(jm, "mg_gamma");
  if (jm.contains("mg_eta")) c.mg_eta = jnum(jm, "mg_eta");
  if (jm.contains("mg_rho")) c.mg_rho = jnum(jm, "mg_rho");
  if (jm.contains("mg_epsilon")) c.mg_epsilon = jnum(jm, "mg_epsilon");
  if (jm.contains("mg_kappa")) c.mg_kappa = jnum(jm, "mg_kappa");
  if (jm.contains("mg_mu")) c.mg_mu = jnum(jm, "mg_mu");
  if (jm.contains("mg_full_solve")) c.mg_full_solve = jm.at("mg_full_solve").get<bool>();
  return c;
}

EnergyParams energy_from_json(const json& jm) {
  EnergyParams e;
  for (const char* req : {"eps_flop", "eps_mem", "pi0"}) {
    if (!jm.contains(req)) throw validation_error(req, "required energy field missing");
  }
  e.eps_flop = jnum(jm, "eps_flop");
  e.eps_mem = jnum(jm, "eps_mem");
  e.pi0 = jnum(jm, "pi0");
  if (e.eps_flop < 0 || e.eps_mem < 0 || e.pi0 < 0)
    throw validation_error("energy", "energy constants must be nonnegative");
  return e;
}

ResilienceParams resilience_from_json(const json& jm) {
  ResilienceParams r;
  if (jm.contains("fit")) r.fit = jnum(jm, "fit");
  if (jm.contains("a")) r.a = jnum(jm, "a");
  if (jm.contains("b")) r.b = jnum(jm, "b");
  if (jm.contains("p_a")) r.p_a = jnum(jm, "p_a");
  if (jm.contains("p_b")) r.p_b = jnum(jm, "p_b");
  if (jm.contains("h_bar")) r.h_bar_override = jnum(jm, "h_bar");
  if (jm.contains("h_bar_override")) r.h_bar_override = jnum(jm, "h_bar_override");
  if (r.fit < 0) throw validation_error("fit", "fit must be nonnegative");
  for (auto [v, n] : {std::pair{r.a, "a"}, {r.b, "b"}, {r.p_a, "p_a"}, {r.p_b, "p_b"}}) {
    if (v < 0 || v > 1) throw validation_error(n, std::string(n) + " must lie in [0,1]");
  }
  return r;
}

double resolve_element_size(const MachineSpec& m, const MethodConfig& c) {
  return c.element_size ? *c.element_size : m.element_size;
}

double resolve_p(const MachineSpec& m, const MethodConfig& c) {
  return c.P_override ? *c.P_override : m.P;
}

double resolve_n(const MachineSpec& m, const MethodConfig& c) {
  return c.n_is_per_node ? c.N * resolve_p(m, c) : c.N;
}

}  // namespace exaperf
