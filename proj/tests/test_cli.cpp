#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "test_support.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("EXAPERF_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>cli_stderr.txt";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WEXITSTATUS(status);
  return r;
}

std::string cfg(const std::string& rel) { return testsup::config(rel); }

}  // namespace

TEST_CASE("cost on the unit machine reproduces the worked fft example") {
  RunResult r = run("cost --machine " + cfg("machines/unit.json") + " --method " +
                    cfg("methods/fft_n512_p4.json") + " --out -");
  CHECK(r.code == 0);
  // t_net column of the totals row.
  CHECK(r.out.find(",260,") != std::string::npos);
}

TEST_CASE("roofline two-point sweep hits the plateau") {
  RunResult r = run("roofline --machine " + cfg("machines/cpu2015.json") +
                    " --ai-range 1:16:2 --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("ai,attainable_flops") != std::string::npos);
  CHECK(r.out.find("1,6.8e+10") != std::string::npos);
  CHECK(r.out.find("16,5.888e+11") != std::string::npos);
}

TEST_CASE("project prints the published factor and value") {
  RunResult r = run("project --machine " + cfg("machines/cpu2015.json") +
                    " --horizon 10 --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("peak") != std::string::npos);
  CHECK(r.out.find("32") != std::string::npos);
  CHECK(r.out.find("18.8 TF/s") != std::string::npos);
}

TEST_CASE("validation failures exit 1 with messages on stderr") {
  std::string bad = "cli_bad_method.json";
  {
    FILE* f = fopen(bad.c_str(), "w");
    fputs("{\"method\":{\"method\":\"mg\",\"N\":512,\"mg_gamma\":1,\"mg_eta\":2}}", f);
    fclose(f);
  }
  RunResult r = run("cost --machine " + cfg("machines/unit.json") + " --method " + bad +
                    " --out -");
  CHECK(r.code == 1);
  std::string err = testsup::slurp("cli_stderr.txt");
  CHECK(err.find("mg_gamma") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("missing files are I/O errors (exit 2)") {
  RunResult r = run("cost --machine does_not_exist.json --out -");
  CHECK(r.code == 2);
}

TEST_CASE("energy curve emits joules per flop") {
  RunResult r = run("energy --machine " + cfg("energy/gpu_gtx580.json") +
                    " --ai-range 1:1024:8 --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("ai,joules_per_flop") != std::string::npos);
}

TEST_CASE("resilience subcommand emits the report") {
  RunResult r = run("resilience --machine " + cfg("machines/cpu2015.json") + " --method " +
                    cfg("scenarios/mg_res2015.json") + " --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("method,component,level,factor_type,value") != std::string::npos);
  CHECK(r.out.find("dvf") != std::string::npos);
  CHECK(r.out.find("cvf") != std::string::npos);
}

TEST_CASE("compare emits one row per metric") {
  RunResult r = run("compare --machine " + cfg("machines/cpu2025.json") + " --machine " +
                    cfg("machines/gpu2025.json") + " --method " +
                    cfg("scenarios/mg_65k.json") + " --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("t_mem") != std::string::npos);
  CHECK(r.out.find("cpu2025") != std::string::npos);
  CHECK(r.out.find("winner") != std::string::npos);
}

TEST_CASE("explicit output selectors restrict the report") {
  namespace fs = std::filesystem;
  {
    FILE* f = fopen("cli_sel_method.json", "w");
    fputs("{\"method\":{\"method\":\"fft\",\"N\":512},\"outputs\":[\"cost\"]}", f);
    fclose(f);
  }
  RunResult r = run("report --machine " + cfg("machines/unit.json") +
                    " --method cli_sel_method.json --out cli_sel_out");
  CHECK(r.code == 0);
  CHECK(fs::exists("cli_sel_out/cost.csv"));
  CHECK(fs::exists("cli_sel_out/manifest.json"));
  CHECK(!fs::exists("cli_sel_out/roofline.csv"));
  fs::remove_all("cli_sel_out");
  std::remove("cli_sel_method.json");
}

TEST_CASE("selectors without their sections fail report validation") {
  {
    FILE* f = fopen("cli_sel_bad.json", "w");
    fputs("{\"method\":{\"method\":\"fft\",\"N\":512},\"outputs\":[\"energy\"]}", f);
    fclose(f);
  }
  RunResult r = run("report --machine " + cfg("machines/unit.json") +
                    " --method cli_sel_bad.json --out cli_sel_bad_out");
  CHECK(r.code == 1);
  std::string err = testsup::slurp("cli_stderr.txt");
  CHECK(err.find("energy") != std::string::npos);
  std::remove("cli_sel_bad.json");
}

TEST_CASE("report writes byte-identical data files on repeat runs") {
  namespace fs = std::filesystem;
  std::string d1 = "cli_report_run1", d2 = "cli_report_run2";
  for (const std::string& d : {d1, d2}) {
    RunResult r = run("report --machine " + cfg("machines/cpu2015.json") + " --method " +
                      cfg("methods/fmm.json") + " --out " + d);
    REQUIRE(r.code == 0);
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d1)) {
    std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;  // carries the timestamp
    CHECK(testsup::slurp(entry.path().string()) == testsup::slurp(d2 + "/" + name));
    ++compared;
  }
  CHECK(compared >= 2);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("network override switches the fft transpose bound") {
  RunResult r = run("cost --machine " + cfg("machines/unit.json") + " --method " +
                    cfg("methods/fft_n512_p4.json") + " --network torus3d --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("410.374669") != std::string::npos);
}

TEST_CASE("energy with a method writes per-kernel joules in directory mode") {
  namespace fs = std::filesystem;
  RunResult r = run("energy --machine " + cfg("energy/cpu_i7.json") + " --method " +
                    cfg("methods/fft.json") + " --out cli_energy_dir");
  CHECK(r.code == 0);
  std::string k = testsup::slurp("cli_energy_dir/energy_kernels.csv");
  CHECK(k.find("phase,joules") != std::string::npos);
  fs::remove_all("cli_energy_dir");
}

TEST_CASE("project fits a doubling time from a trend csv") {
  {
    FILE* f = fopen("cli_trend.csv", "w");
    fputs("year,value\n2010,100\n2012,200\n2014,400\n2016,800\n", f);
    fclose(f);
  }
  RunResult r = run("project --trend cli_trend.csv --horizon 10 --out -");
  CHECK(r.code == 0);
  // d = 2.0 years -> factor 32 on the last observed value 800.
  CHECK(r.out.find(",2,32,25600") != std::string::npos);
  std::remove("cli_trend.csv");
}

TEST_CASE("memory-aware roofline evaluates each tier") {
  RunResult r = run("roofline --machine " + cfg("machines/cpu2025.json") + " --tiers " +
                    cfg("tiers.json") + " --ai-range 1:1:1 --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("tier,ai,attainable_flops") != std::string::npos);
  CHECK(r.out.find("HMC,1,2.4e+11") != std::string::npos);
  CHECK(r.out.find("NVRAM,1,1e+10") != std::string::npos);
}

TEST_CASE("json format mirrors the csv") {
  RunResult r = run("cost --machine " + cfg("machines/unit.json") + " --method " +
                    cfg("methods/fft_n512_p4.json") + " --format json --out -");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"t_net\"") != std::string::npos);
  CHECK(r.out.find("260") != std::string::npos);
}
