#include <doctest.h>

#include <cmath>

#include "exaperf/analysis.hpp"
#include "exaperf/errors.hpp"
#include "test_support.hpp"

using namespace exaperf;
using testsup::cpu2015;
using testsup::unit_machine;

namespace {

MachineSpec fig_gpu() {
  MachineSpec m = unit_machine();
  m.name = "gtx580-dp";
  m.t_c = 5.1e-12;
  m.beta_mem = 5.2e-12;
  m.element_size = 8;
  return m;
}

EnergyParams gpu_energy() { return {212e-12, 513e-12, 122.0}; }
EnergyParams cpu_energy() { return {670e-12, 795e-12, 122.0}; }

}  // namespace

TEST_CASE("roofline of the 2015 CPU") {
  MachineSpec m = cpu2015();
  CHECK(roofline(m, 1.0).attainable == doctest::Approx(68e9).epsilon(1e-12));
  CHECK(roofline(m, 0.0).attainable == 0.0);
  double ridge = balance_point(m);
  CHECK(ridge == doctest::Approx(8.659).epsilon(2e-4));
  // At the ridge the plateau is met exactly.
  CHECK(roofline(m, ridge).attainable == m.peak_flops());
  CHECK(roofline(m, 2 * ridge).attainable == m.peak_flops());
}

TEST_CASE("roofline is monotone and piecewise linear over a sweep") {
  MachineSpec m = cpu2015();
  auto ais = ai_samples(1.0 / 16, 1024, 64);
  double prev = -1;
  for (double ai : ais) {
    double a = roofline(m, ai).attainable;
    CHECK(a >= prev);
    prev = a;
    if (ai < balance_point(m)) CHECK(a == doctest::Approx(m.mem_bandwidth() * ai));
    else CHECK(a == m.peak_flops());
  }
}

TEST_CASE("balance_time follows the max(1, B/ai) rule") {
  MachineSpec m = unit_machine();
  m.beta_mem = 4.0;  // B_tau = 4
  CHECK(balance_time(m, 10, 2.0) == 20.0);
  CHECK(balance_time(m, 10, 4.0) == 10.0);
  CHECK(balance_time(m, 10, 100.0) == 10.0);  // compute-bound plateau
  // Halving ai below the balance point doubles the time.
  CHECK(balance_time(m, 10, 1.0) == 2.0 * balance_time(m, 10, 2.0));
}

TEST_CASE("time per flop is constant above the balance point, decreasing below") {
  MachineSpec m = cpu2015();
  double b = balance_point(m);
  double prev = -1;
  bool crossed = false;
  for (double ai : ai_samples(1.0 / 16, 1024, 64)) {
    double t = balance_time(m, 1, ai);
    if (ai >= b) {
      CHECK(t == m.flop_time());
      crossed = true;
    } else if (prev > 0) {
      CHECK(t < prev);
    }
    prev = t;
  }
  CHECK(crossed);
}

TEST_CASE("energy is the linear form") {
  CHECK(energy(gpu_energy(), 0, 0, 1.0) == 122.0);
  CHECK(energy(cpu_energy(), 1, 1, 0) == doctest::Approx(1465e-12).epsilon(1e-12));
  CHECK(energy(gpu_energy(), 2, 0, 0) == doctest::Approx(424e-12));
}

TEST_CASE("energy roofline reproduces the published GPU constants") {
  MachineSpec m = fig_gpu();
  EnergyParams e = gpu_energy();
  // Compute-bound limit: eps_flop + pi0 * t_c.
  double floor = e.eps_flop + e.pi0 * m.flop_time();
  CHECK(floor == doctest::Approx(834.2e-12).epsilon(1e-4));
  CHECK(energy_roofline(e, m, 1e12) == doctest::Approx(floor).epsilon(1e-9));
  // Memory-bound at ai=1: 212(1 + 2.42) pJ + 122 W x 5.2 ps.
  CHECK(energy_roofline(e, m, 1.0) == doctest::Approx(1359.4e-12).epsilon(1e-4));
}

TEST_CASE("energy per flop is nonincreasing and bounded below") {
  MachineSpec m = fig_gpu();
  EnergyParams e = gpu_energy();
  double b = balance_point(m);
  double floor = e.eps_flop + e.pi0 * m.flop_time();
  double prev = std::numeric_limits<double>::infinity();
  for (double ai : ai_samples(1.0 / 16, 1024, 64)) {
    double v = energy_roofline(e, m, ai);
    CHECK(v <= prev);
    if (ai < b) CHECK(v < prev);  // strictly decreasing below the balance point
    CHECK(v >= floor);
    prev = v;
  }
}

TEST_CASE("bandwidth derating shifts the ridge and the slope") {
  MachineSpec m = cpu2015();
  MachineSpec derated = m;
  derated.bandwidth_efficiency = 0.5;
  CHECK(balance_point(derated) == doctest::Approx(2.0 * balance_point(m)));
  CHECK(roofline(derated, 1.0).attainable == doctest::Approx(0.5 * roofline(m, 1.0).attainable));
  CHECK(roofline(derated, 4 * balance_point(derated)).attainable == m.peak_flops());
}

TEST_CASE("free memory leaves only the leakage slope") {
  MachineSpec m = fig_gpu();
  EnergyParams e = gpu_energy();
  e.eps_mem = 0;
  double b = balance_point(m);
  // Above the balance point the curve is flat at the floor.
  CHECK(energy_roofline(e, m, 2 * b) == energy_roofline(e, m, 4 * b));
  CHECK(energy_roofline(e, m, 2 * b) == e.eps_flop + e.pi0 * m.flop_time());
  // Below it, only leakage lifts the curve.
  CHECK(energy_roofline(e, m, b / 2) > energy_roofline(e, m, b));
}

TEST_CASE("memory-aware roofline evaluates every tier") {
  std::vector<MemoryTier> tiers = {{"HMC", 240e9, 16e9},
                                   {"HBM", 200e9, 16e9},
                                   {"DDR", 20e9, 64e9},
                                   {"NVRAM", 10e9, 256e9}};
  double peak = 18.8e12;
  auto at1 = memory_aware_roofline(tiers, peak, 1.0);
  REQUIRE(at1.size() == 4);
  CHECK(at1[0].second == 240e9);
  CHECK(at1[1].second == 200e9);
  CHECK(at1[2].second == 20e9);
  CHECK(at1[3].second == 10e9);
  for (const auto& [tier, a] : memory_aware_roofline(tiers, peak, 1e9))
    CHECK(a == peak);
  // A single tier reduces to the plain roofline.
  MachineSpec m = cpu2015();
  auto single = memory_aware_roofline({{"mem", 1.0 / m.beta_mem, m.Z}}, m.peak_flops(), 2.0);
  CHECK(single[0].second == doctest::Approx(roofline(m, 2.0).attainable));
}

TEST_CASE("tech node table is internally consistent") {
  REQUIRE(tech_nodes().size() == 6);
  for (const auto& n : tech_nodes()) {
    double product = n.capacitance_ratio * n.voltage_ratio * n.voltage_ratio * n.freq_ratio;
    // Ratios are printed to two decimals; consistency is absolute in
    // those normalized units.
    CHECK(std::fabs(product - n.power_ratio) <= 0.02);
  }
  CHECK_THROWS_AS(tech_node(7), ModelError);
}

TEST_CASE("scaling energy constants between nodes") {
  EnergyParams e = cpu_energy();
  MachineSpec m = cpu2015();
  SUBCASE("45 to 8 nm") {
    auto [se, sm] = scale_energy_params(e, m, tech_node(45), tech_node(8));
    CHECK(se.eps_flop / e.eps_flop == doctest::Approx(0.22 / 1.34).epsilon(1e-12));
    CHECK(se.eps_flop / e.eps_flop == doctest::Approx(0.164).epsilon(0.002 / 0.164));
    CHECK(sm.t_c == doctest::Approx(m.t_c / 1.34));
    CHECK(sm.beta_mem == doctest::Approx(m.beta_mem / 1.34));
    CHECK(se.pi0 == e.pi0);  // leakage not rescaled
  }
  SUBCASE("identity") {
    auto [se, sm] = scale_energy_params(e, m, tech_node(45), tech_node(45));
    CHECK(se.eps_flop == e.eps_flop);
    CHECK(sm.t_c == m.t_c);
  }
  SUBCASE("32 nm row checks out against its own product") {
    const TechNode& n = tech_node(32);
    CHECK(n.power_ratio == 0.71);
    CHECK(n.capacitance_ratio * n.voltage_ratio * n.voltage_ratio * n.freq_ratio ==
          doctest::Approx(0.714).epsilon(2e-3));
  }
}

TEST_CASE("kernel AI") {
  MachineSpec m = cpu2015();
  SUBCASE("fmm p2p AI grows linearly with q") {
    MethodConfig c;
    c.method = Method::FMM;
    c.N = 32768 * 512;
    c.P_override = 512;
    c.fmm_k = 8;
    c.fmm_q = 32;
    double ai32 = kernel_ai(fmm_p2p_cost(m, c));
    c.fmm_q = 64;
    double ai64 = kernel_ai(fmm_p2p_cost(m, c));
    CHECK(ai64 / ai32 > 1.9);
    CHECK(ai64 / ai32 < 2.1);
  }
  SUBCASE("fft AI collapses to (5/es) log2 cbrt(N) inside cache") {
    MethodConfig c;
    c.method = Method::FFT;
    c.N = 16777216;  // 256^3, cbrt fits the 40 MB cache
    c.element_size = 16;
    double ai = kernel_ai(fft_cost(m, c));
    CHECK(ai == doctest::Approx((5.0 / 16.0) * std::log2(256.0)).epsilon(1e-12));
  }
  SUBCASE("zero flops give zero AI, zero traffic throws") {
    CostBreakdown cb;
    cb.n_flop = 0;
    cb.n_mem_bytes = 10;
    CHECK(kernel_ai(cb) == 0.0);
    cb.n_mem_bytes = 0;
    CHECK_THROWS_AS(kernel_ai(cb), ModelError);
  }
}

TEST_CASE("fmm p2p crosses the balance point between 2015 and 2025 CPUs") {
  // Pinned default config: q=8, one flop per interaction.
  MethodConfig c;
  c.method = Method::FMM;
  c.fmm_q = 8;
  c.fmm_k = 8;
  c.fmm_flops_per_interaction = 1;

  MachineSpec m15 = load_machine_spec(testsup::config("machines/cpu2015.json"));
  c.N = 32768 * m15.P;
  double ai15 = kernel_ai(fmm_p2p_cost(m15, c));
  CHECK(ai15 > balance_point(m15));  // compute-bound today

  MachineSpec m25 = load_machine_spec(testsup::config("machines/cpu2025.json"));
  c.N = 274625 * m25.P;
  double ai25 = kernel_ai(fmm_p2p_cost(m25, c));
  CHECK(ai25 < balance_point(m25));  // memory-bound at exascale
}

TEST_CASE("ai_samples covers the range inclusively") {
  auto s = ai_samples(1, 16, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 16.0);
  auto t = ai_samples(0.0625, 1024, 64);
  CHECK(t.size() == 64);
  CHECK(t.front() == 0.0625);
  CHECK(t.back() == 1024.0);
}
