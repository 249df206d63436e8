#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace exaperf {

enum class Topology { FullyConnected, Torus3D };
enum class Method { FFT, FMM, MG };
enum class FmmVariant { KIFMM, ExaFMM };

// The eight series expansions whose M2L translation cost f(k) the model
// distinguishes.
enum class Expansion {
  CartesianTaylor,
  CartesianChebyshev,
  SphericalHarmonics,
  SphericalRotation,
  SphericalFFT,
  Planewave,
  EquivalentCharges,
  EquivalentChargesFFT,
};

const char* to_string(Topology t);
const char* to_string(Method m);
const char* to_string(FmmVariant v);
const char* to_string(Expansion e);

// One processor/node/network parameterization. All fields are base SI:
// seconds, bytes, watts, joules. Immutable after construction; safe to
// share across threads.
struct MachineSpec {
  std::string name;
  double t_c = 0.0;       // seconds per FLOP, per core
  double beta_mem = 0.0;  // seconds per byte (inverse memory bandwidth)
  double beta_link = 0.0; // seconds per byte (inverse link bandwidth)
  double alpha = 1e-6;    // seconds per message
  double Z = 0.0;         // fast-memory capacity, bytes
  double L = 0.0;         // cache-line size, bytes
  double cores = 1.0;
  double P = 1.0;         // processors (nodes)
  double beta_pcie = 0.0; // seconds per byte; 0 models on-package integration
  double element_size = 8.0;          // bytes per data element
  double bandwidth_efficiency = 1.0;  // sustained/peak memory bandwidth
  Topology topology = Topology::FullyConnected;

  // Whole-processor peak, FLOP/s.
  double peak_flops() const { return cores / t_c; }
  // Seconds per FLOP at full processor throughput; the `t_c` of the
  // analytical models, which charge a node's FLOPs to the whole
  // processor rather than one core.
  double flop_time() const { return t_c / cores; }
  double mem_bandwidth() const { return bandwidth_efficiency / beta_mem; }
};

// Method selection plus its knobs. Fields that do not apply to the
// selected method are left unset and ignored.
struct MethodConfig {
  Method method = Method::FFT;
  double N = 0.0;              // total problem size in elements/points
  bool n_is_per_node = false;  // true when the config gave n_per_node
  std::optional<double> P_override;      // scenario node count
  std::optional<double> element_size;    // see resolve_element_size
  // FMM
  std::optional<double> fmm_q;
  std::optional<double> fmm_k;
  std::optional<Expansion> fmm_expansion;
  std::optional<FmmVariant> fmm_variant;
  double fmm_flops_per_interaction = 1.0;
  std::optional<double> fmm_coeff_elems;  // per-box M2L payload override
  // MG
  std::optional<double> mg_gamma;
  std::optional<double> mg_eta;
  std::optional<double> mg_rho;
  std::optional<double> mg_epsilon;
  std::optional<double> mg_kappa;
  std::optional<double> mg_mu;
  bool mg_full_solve = false;
};

// Energy-model constants of eq-style E = n_FLOP eps_flop + n_mem eps_mem
// + pi0 T.
struct EnergyParams {
  double eps_flop = 0.0;  // joules per FLOP
  double eps_mem = 0.0;   // joules per byte
  double pi0 = 0.0;       // watts, constant leakage
  double energy_balance() const { return eps_flop > 0 ? eps_mem / eps_flop : 0.0; }
};

struct ResilienceParams {
  double fit = 10.0;  // failures per 1e9 device-hours per Mbit
  double a = 0.0;     // probability of event A (single-link)
  double b = 0.0;     // probability of event B (node-incident links)
  double p_a = 0.0;   // link-failure probability under A
  double p_b = 0.0;   // link-failure probability under B
  std::optional<double> h_bar_override;  // hop count
};

struct Violation {
  std::string field;
  std::string message;
  // Structural findings concern grid shape (perfect cube, octree leaf
  // counts); the closed-form models still evaluate without them.
  bool structural = false;
};

MachineSpec load_machine_spec(const std::string& path);
std::string serialize_machine(const MachineSpec& m);

// Section parsers for the shared config format (top-level objects
// "machine", "method", "energy", "resilience").
MachineSpec machine_from_json(const nlohmann::json& jm);
MethodConfig method_from_json(const nlohmann::json& jm);
EnergyParams energy_from_json(const nlohmann::json& jm);
ResilienceParams resilience_from_json(const nlohmann::json& jm);

// Complete, deterministic list of violated invariants; empty on success.
std::vector<Violation> validate_machine(const MachineSpec& m);
std::vector<Violation> validate_scenario(const MachineSpec& m, const MethodConfig& c);

double resolve_element_size(const MachineSpec& m, const MethodConfig& c);
// Node count (method override wins) and total problem size.
double resolve_p(const MachineSpec& m, const MethodConfig& c);
double resolve_n(const MachineSpec& m, const MethodConfig& c);

}  // namespace exaperf
