// Scenario-driven front end for the analytical cost, energy, and
// resilience models. Emits CSV/JSON tables; see README for the config
// format and bundled reference files.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exaperf/analysis.hpp"
#include "exaperf/errors.hpp"
#include "exaperf/kernels.hpp"
#include "exaperf/report.hpp"
#include "exaperf/resilience.hpp"
#include "exaperf/scenario.hpp"
#include "exaperf/trend.hpp"
#include "exaperf/units.hpp"

namespace {

using namespace exaperf;

struct CommonOpts {
  std::string machine_file;
  std::string method_file;
  std::string out = "-";
  std::string format = "csv";
  std::string overlap;
  std::string network;
  std::string ai_range = "0.0625:1024:64";
  double horizon = 10.0;
};

Format parse_format(const std::string& f) {
  if (f == "json") return Format::Json;
  return Format::Csv;
}

void parse_ai_range(const std::string& spec, double& lo, double& hi, int& points) {
  double a = 0.0625, b = 1024;
  int n = 64;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || a <= 0 || b < a || n < 1)
    throw validation_error("--ai-range", "expected lo:hi:points with 0 < lo <= hi");
  lo = a; hi = b; points = n;
}

Scenario load(const CommonOpts& o, bool need_method) {
  std::vector<std::string> files;
  if (!o.machine_file.empty()) files.push_back(o.machine_file);
  if (!o.method_file.empty()) files.push_back(o.method_file);
  Scenario s = load_scenario(files);
  if (need_method && o.method_file.empty())
    throw validation_error("--method", "this subcommand needs a method file");
  if (!o.overlap.empty()) s.overlap = o.overlap == "max" ? Overlap::Max : Overlap::Sum;
  if (!o.network.empty()) {
    s.machine.topology = (o.network == "torus3d" || o.network == "torus")
                             ? Topology::Torus3D
                             : Topology::FullyConnected;
  }
  return s;
}

int fail_validation(const std::vector<Violation>& violations) {
  for (const auto& v : violations) std::cerr << v.field << ": " << v.message << "\n";
  return 1;
}

void deliver(const std::string& out, const std::string& default_name,
             const std::string& content) {
  if (out == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out);
  write_file_atomic((std::filesystem::path(out) / default_name).string(), content);
}

int cmd_cost(const CommonOpts& o) {
  Scenario s = load(o, true);
  auto violations = validate_scenario(s.machine, s.method);
  if (!violations.empty()) return fail_validation(violations);
  auto phases = method_cost(s.machine, s.method);
  Format fmt = parse_format(o.format);
  deliver(o.out, std::string("cost") + (fmt == Format::Json ? ".json" : ".csv"),
          cost_table(to_string(s.method.method), phases, fmt));
  return 0;
}

int cmd_roofline(const CommonOpts& o, const std::string& tiers_file) {
  Scenario s = load(o, false);
  auto violations = validate_machine(s.machine);
  if (!violations.empty()) return fail_validation(violations);
  double lo, hi;
  int points;
  parse_ai_range(o.ai_range, lo, hi, points);
  Format fmt = parse_format(o.format);
  std::string ext = fmt == Format::Json ? ".json" : ".csv";

  if (!tiers_file.empty()) {
    auto tiers = load_tiers(tiers_file);
    std::vector<std::pair<std::string, RooflinePoint>> pts;
    for (double ai : ai_samples(lo, hi, points)) {
      for (const auto& [tier, attainable] :
           memory_aware_roofline(tiers, s.machine.peak_flops(), ai)) {
        pts.emplace_back(tier.name, RooflinePoint{ai, attainable});
      }
    }
    deliver(o.out, "roofline_tiers" + ext, tier_curve_table(pts, fmt));
    return 0;
  }

  std::vector<RooflinePoint> pts;
  for (double ai : ai_samples(lo, hi, points)) pts.push_back(roofline(s.machine, ai));
  deliver(o.out, "roofline" + ext, curve_table(pts, fmt));

  if (!o.method_file.empty() && o.out != "-") {
    auto phases = method_cost(s.machine, s.method);
    std::vector<std::pair<std::string, RooflinePoint>> kpts;
    for (const auto& p : phases) {
      if (p.phase == "total" || p.n_mem_bytes <= 0) continue;
      kpts.emplace_back(p.phase, roofline(s.machine, kernel_ai(p)));
    }
    deliver(o.out, "roofline_kernels" + ext, kernel_points_table(kpts, fmt));
  }
  return 0;
}

int cmd_energy(const CommonOpts& o) {
  Scenario s = load(o, false);
  if (!s.energy) {
    std::cerr << "energy: no 'energy' section in the given files\n";
    return 1;
  }
  auto violations = validate_machine(s.machine);
  if (!violations.empty()) return fail_validation(violations);
  double lo, hi;
  int points;
  parse_ai_range(o.ai_range, lo, hi, points);
  Format fmt = parse_format(o.format);
  std::string ext = fmt == Format::Json ? ".json" : ".csv";
  std::vector<std::pair<double, double>> pts;
  for (double ai : ai_samples(lo, hi, points))
    pts.emplace_back(ai, energy_roofline(*s.energy, s.machine, ai));
  deliver(o.out, "energy" + ext, energy_curve_table(pts, fmt));
  if (!o.method_file.empty() && o.out != "-") {
    auto phases = method_cost(s.machine, s.method);
    std::vector<std::pair<std::string, double>> rows;
    for (const auto& p : phases) {
      double t = total_time(p, s.overlap);
      rows.emplace_back(p.phase, energy(*s.energy, p.n_flop, p.n_mem_bytes, t));
    }
    deliver(o.out, "energy_kernels" + ext, energy_kernels_table(rows, fmt));
  }
  return 0;
}

int cmd_project(const CommonOpts& o, const std::string& trend_file) {
  Format fmt = parse_format(o.format);
  if (!trend_file.empty()) {
    TrendSeries series = load_trend_csv(trend_file, "trend");
    double d = fit_doubling_time(series);
    double base = series.points.back().second;
    ProjectionRow row = project(series.metric, base, d, o.horizon);
    deliver(o.out, std::string("projection") + (fmt == Format::Json ? ".json" : ".csv"),
            projection_table({row}, fmt));
    return 0;
  }
  Scenario s = load(o, false);
  if (s.doubling_times.empty()) {
    std::cerr << "project: no 'doubling_times' section in the given files\n";
    return 1;
  }
  MachineProjection proj = project_machine(s.machine, s.doubling_times, o.horizon);
  deliver(o.out, std::string("projection") + (fmt == Format::Json ? ".json" : ".csv"),
          projection_table(proj.rows, fmt));
  if (o.out != "-") {
    write_file_atomic((std::filesystem::path(o.out) / "projected_machine.json").string(),
                      serialize_machine(proj.machine));
  } else {
    // Readable summary alongside the raw table.
    std::cout << "\nparameter        base          x       projected\n";
    for (const auto& r : proj.rows) {
      std::string unit = r.parameter == "peak" ? "F/s"
                         : r.parameter.find("bandwidth") != std::string::npos ? "B/s"
                         : r.parameter == "fast_memory" || r.parameter == "line_size" ? "B"
                         : "";
      std::printf("%-16s %-13s %-7s %s\n", r.parameter.c_str(),
                  format_si(r.base_value, unit, 3).c_str(),
                  format_si(r.increase_factor, "", 3).c_str(),
                  format_si(r.projected_value, unit, 3).c_str());
    }
  }
  return 0;
}

int cmd_resilience(const CommonOpts& o) {
  Scenario s = load(o, true);
  if (!s.resilience) {
    std::cerr << "resilience: no 'resilience' section in the given files\n";
    return 1;
  }
  auto violations = validate_scenario(s.machine, s.method);
  // Grid-shape findings stay warnings here: the vulnerability models
  // evaluate the closed forms continuously.
  std::vector<Violation> fatal;
  for (const auto& v : violations) {
    if (v.structural) std::cerr << "warning: " << v.field << ": " << v.message << "\n";
    else fatal.push_back(v);
  }
  if (!fatal.empty()) return fail_validation(fatal);
  VulnerabilityReport rep =
      vulnerability_report(s.machine, s.method, *s.resilience, s.overlap);
  Format fmt = parse_format(o.format);
  deliver(o.out, std::string("resilience") + (fmt == Format::Json ? ".json" : ".csv"),
          resilience_table(rep, fmt));
  return 0;
}

int cmd_report(const CommonOpts& o) {
  Scenario s = load(o, false);
  std::vector<Violation> violations;
  if (s.method.N >= 1) {
    for (const auto& v : validate_scenario(s.machine, s.method))
      if (!v.structural) violations.push_back(v);
  } else {
    violations = validate_machine(s.machine);
  }
  auto out_checks = validate_outputs(s);
  violations.insert(violations.end(), out_checks.begin(), out_checks.end());
  if (!violations.empty()) return fail_validation(violations);
  if (o.out == "-") {
    std::cerr << "report: --out must name a directory\n";
    return 1;
  }
  double lo, hi;
  int points;
  parse_ai_range(o.ai_range, lo, hi, points);
  run_report(s, o.out, parse_format(o.format), o.horizon, lo, hi, points);
  return 0;
}

int cmd_compare(const std::vector<std::string>& machine_files, const CommonOpts& o) {
  if (machine_files.size() < 2) {
    std::cerr << "compare: pass --machine at least twice\n";
    return 1;
  }
  std::vector<Scenario> scenarios;
  for (const auto& mf : machine_files) {
    CommonOpts each = o;
    each.machine_file = mf;
    scenarios.push_back(load(each, true));
  }
  Comparison cmp = compare(scenarios);
  deliver(o.out, std::string("compare") + (o.format == "json" ? ".json" : ".csv"),
          compare_table(cmp, parse_format(o.format)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical performance, energy, and resilience models for FFT, FMM, and MG"};
  app.require_subcommand(1);

  CommonOpts o;
  std::vector<std::string> compare_machines;
  std::string tiers_file;
  std::string trend_file;

  auto add_common = [&](CLI::App* cmd, bool with_machine = true) {
    if (with_machine) cmd->add_option("--machine", o.machine_file, "machine config file");
    cmd->add_option("--method", o.method_file, "method config file");
    cmd->add_option("--out", o.out, "output directory, or - for stdout");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--overlap", o.overlap, "sum or max")->check(CLI::IsMember({"sum", "max"}));
    cmd->add_option("--network", o.network, "override topology: full or torus3d")
        ->check(CLI::IsMember({"full", "torus3d", "torus", "fully_connected"}));
    cmd->add_option("--ai-range", o.ai_range, "lo:hi:points for AI sweeps");
    cmd->add_option("--horizon", o.horizon, "projection horizon in years");
  };

  CLI::App* cost = app.add_subcommand("cost", "per-phase cost breakdown");
  add_common(cost);
  CLI::App* roof = app.add_subcommand("roofline", "roofline curve and kernel points");
  add_common(roof);
  roof->add_option("--tiers", tiers_file, "memory-tier config for a memory-aware roofline");
  CLI::App* energy = app.add_subcommand("energy", "energy-roofline curve");
  add_common(energy);
  CLI::App* project = app.add_subcommand("project", "hardware-trend projection");
  add_common(project);
  project->add_option("--trend", trend_file, "year,value CSV to fit a doubling time from");
  CLI::App* resilience = app.add_subcommand("resilience", "DVF/CVF vulnerability report");
  add_common(resilience);
  CLI::App* report = app.add_subcommand("report", "all applicable outputs into a directory");
  add_common(report);
  CLI::App* cmp = app.add_subcommand("compare", "side-by-side communication costs");
  cmp->add_option("--machine", compare_machines, "machine config file (repeat)");
  add_common(cmp, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (cost->parsed()) return cmd_cost(o);
    if (roof->parsed()) return cmd_roofline(o, tiers_file);
    if (energy->parsed()) return cmd_energy(o);
    if (project->parsed()) return cmd_project(o, trend_file);
    if (resilience->parsed()) return cmd_resilience(o);
    if (report->parsed()) return cmd_report(o);
    if (cmp->parsed()) return cmd_compare(compare_machines, o);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
