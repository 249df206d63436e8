#include "exaperf/report.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exaperf/errors.hpp"
#include "exaperf/units.hpp"

namespace exaperf {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g9(double v) { return format_g9(v); }

json rows_to_json(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj;
    for (size_t i = 0; i < header.size() && i < row.size(); ++i) {
      if (row[i].empty()) {
        obj[header[i]] = nullptr;
      } else {
        char* end = nullptr;
        double v = std::strtod(row[i].c_str(), &end);
        if (end && *end == '\0') obj[header[i]] = json::parse(row[i]);
        else obj[header[i]] = row[i];
        (void)v;
      }
    }
    arr.push_back(obj);
  }
  return arr;
}

std::string emit(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows, Format fmt) {
  if (fmt == Format::Json) return rows_to_json(header, rows).dump(2) + "\n";
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string cost_table(const std::string& method, const std::vector<CostBreakdown>& phases,
                       Format fmt) {
  std::vector<std::string> header = {"method", "phase",   "level",    "n_flop",
                                     "n_mem_bytes", "msgs", "net_bytes", "t_comp",
                                     "t_mem",  "t_net",   "t_pcie"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : phases) {
    rows.push_back({method, p.phase, "", g9(p.n_flop), g9(p.n_mem_bytes), g9(p.msgs),
                    g9(p.net_bytes), g9(p.t_comp), g9(p.t_mem), g9(p.t_net), g9(p.t_pcie)});
    for (const auto& l : p.per_level) {
      std::string label = l.scope.empty() ? std::to_string(l.level)
                                          : l.scope + ":" + std::to_string(l.level);
      rows.push_back({method, p.phase, label, "", "", g9(l.msgs), g9(l.net_bytes), "", "",
                      g9(l.t_net), ""});
    }
  }
  return emit(header, rows, fmt);
}

std::string curve_table(const std::vector<RooflinePoint>& pts, Format fmt) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : pts) rows.push_back({g9(p.ai), g9(p.attainable)});
  return emit({"ai", "attainable_flops"}, rows, fmt);
}

std::string energy_curve_table(const std::vector<std::pair<double, double>>& pts, Format fmt) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [ai, jpf] : pts) rows.push_back({g9(ai), g9(jpf)});
  return emit({"ai", "joules_per_flop"}, rows, fmt);
}

std::string energy_kernels_table(const std::vector<std::pair<std::string, double>>& rows,
                                 Format fmt) {
  std::vector<std::vector<std::string>> out;
  for (const auto& [phase, joules] : rows) out.push_back({phase, g9(joules)});
  return emit({"phase", "joules"}, out, fmt);
}

std::string kernel_points_table(
    const std::vector<std::pair<std::string, RooflinePoint>>& pts, Format fmt) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, p] : pts) rows.push_back({name, g9(p.ai), g9(p.attainable)});
  return emit({"kernel", "ai", "attainable_flops"}, rows, fmt);
}

std::string tier_curve_table(
    const std::vector<std::pair<std::string, RooflinePoint>>& pts, Format fmt) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, p] : pts) rows.push_back({name, g9(p.ai), g9(p.attainable)});
  return emit({"tier", "ai", "attainable_flops"}, rows, fmt);
}

std::string projection_table(const std::vector<ProjectionRow>& rows, Format fmt) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows)
    out.push_back({r.parameter, g9(r.base_value), g9(r.doubling_time), g9(r.increase_factor),
                   g9(r.projected_value)});
  return emit({"parameter", "base", "doubling_time", "factor", "projected"}, out, fmt);
}

std::string resilience_table(const VulnerabilityReport& rep, Format fmt) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : rep.per_structure)
    rows.push_back({rep.method, s.structure, "", "dvf", g9(s.dvf)});
  rows.push_back({rep.method, "total", "", "dvf", g9(rep.dvf_total)});
  for (const auto& k : rep.per_kernel) {
    for (const auto& [label, v] : k.per_level)
      rows.push_back({rep.method, k.kernel, label, "cvf", g9(v)});
    rows.push_back({rep.method, k.kernel, "", "cvf", g9(k.cvf)});
  }
  rows.push_back({rep.method, "total", "", "cvf", g9(rep.cvf_total)});
  return emit({"method", "component", "level", "factor_type", "value"}, rows, fmt);
}

Comparison compare(const std::vector<Scenario>& scenarios) {
  if (scenarios.size() < 2)
    throw ModelError(ModelError::Kind::MixedMethods, "compare needs at least 2 scenarios");
  Comparison cmp;
  cmp.method = to_string(scenarios.front().method.method);
  for (const auto& s : scenarios) {
    if (std::string(to_string(s.method.method)) != cmp.method)
      throw ModelError(ModelError::Kind::MixedMethods,
                       "compare requires scenarios sharing one method");
    cmp.machines.push_back(s.machine.name);
  }

  CompareColumn mem{"t_mem", {}, ""}, net{"t_net", {}, ""}, pcie{"t_pcie", {}, ""},
      comm{"t_comm", {}, ""};
  for (const auto& s : scenarios) {
    auto phases = method_cost(s.machine, s.method);
    const CostBreakdown& total = phases.back();
    mem.values.push_back(total.t_mem);
    net.values.push_back(total.t_net);
    pcie.values.push_back(total.t_pcie);
    comm.values.push_back(total.t_mem + total.t_net);
  }
  for (CompareColumn* col : {&mem, &net, &pcie, &comm}) {
    size_t best = 0;
    for (size_t i = 1; i < col->values.size(); ++i)
      if (col->values[i] < col->values[best]) best = i;
    col->winner = cmp.machines[best];
    cmp.columns.push_back(*col);
  }
  return cmp;
}

std::string compare_table(const Comparison& cmp, Format fmt) {
  std::vector<std::string> header = {"method", "metric"};
  for (const auto& m : cmp.machines) header.push_back(m);
  header.push_back("winner");
  std::vector<std::vector<std::string>> rows;
  for (const auto& col : cmp.columns) {
    std::vector<std::string> row = {cmp.method, col.metric};
    for (double v : col.values) row.push_back(g9(v));
    row.push_back(col.winner);
    rows.push_back(row);
  }
  return emit(header, rows, fmt);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (line.back() == ',') row.push_back("");
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {
double cell_num(const std::string& s) { return s.empty() ? 0.0 : std::strtod(s.c_str(), nullptr); }
}  // namespace

std::vector<CostBreakdown> parse_cost_csv(const std::string& text) {
  auto rows = parse_csv(text);
  std::vector<CostBreakdown> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 11) continue;
    if (!r[2].empty()) {
      if (out.empty()) continue;
      LevelCost l;
      auto colon = r[2].find(':');
      l.scope = colon == std::string::npos ? "" : r[2].substr(0, colon);
      l.level = std::atoi(colon == std::string::npos ? r[2].c_str() : r[2].c_str() + colon + 1);
      l.msgs = cell_num(r[5]);
      l.net_bytes = cell_num(r[6]);
      l.t_net = cell_num(r[9]);
      out.back().per_level.push_back(l);
      continue;
    }
    CostBreakdown cb;
    cb.phase = r[1];
    cb.n_flop = cell_num(r[3]);
    cb.n_mem_bytes = cell_num(r[4]);
    cb.msgs = cell_num(r[5]);
    cb.net_bytes = cell_num(r[6]);
    cb.t_comp = cell_num(r[7]);
    cb.t_mem = cell_num(r[8]);
    cb.t_net = cell_num(r[9]);
    cb.t_pcie = cell_num(r[10]);
    out.push_back(cb);
  }
  return out;
}

std::vector<RooflinePoint> parse_curve_csv(const std::string& text) {
  auto rows = parse_csv(text);
  std::vector<RooflinePoint> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() < 2) continue;
    out.push_back({cell_num(rows[i][0]), cell_num(rows[i][1])});
  }
  return out;
}

std::vector<ProjectionRow> parse_projection_csv(const std::string& text) {
  auto rows = parse_csv(text);
  std::vector<ProjectionRow> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 5) continue;
    ProjectionRow p;
    p.parameter = r[0];
    p.base_value = cell_num(r[1]);
    p.doubling_time = cell_num(r[2]);
    p.increase_factor = cell_num(r[3]);
    p.projected_value = cell_num(r[4]);
    out.push_back(p);
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::ios_base::failure("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char out[19];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::vector<ReportArtifact> run_report(const Scenario& s, const std::string& out_dir,
                                       Format fmt, double horizon, double ai_lo,
                                       double ai_hi, int ai_points) {
  fs::create_directories(out_dir);
  const std::string ext = fmt == Format::Json ? ".json" : ".csv";
  std::vector<ReportArtifact> artifacts;
  auto emit_artifact = [&](const std::string& stem, const std::string& selector,
                           const std::string& content) {
    std::string file = stem + ext;
    write_file_atomic((fs::path(out_dir) / file).string(), content);
    artifacts.push_back({file, selector});
  };

  std::vector<std::string> selectors = s.outputs;
  if (selectors.empty()) {
    selectors = {"cost", "roofline"};
    if (s.energy) selectors.push_back("energy");
    if (!s.doubling_times.empty()) selectors.push_back("project");
    if (s.resilience) selectors.push_back("resilience");
  }

  bool has_method = s.method.N >= 1;
  std::vector<CostBreakdown> phases;
  if (has_method) phases = method_cost(s.machine, s.method);

  for (const auto& sel : selectors) {
    if (sel == "cost" && has_method) {
      emit_artifact("cost", sel, cost_table(to_string(s.method.method), phases, fmt));
    } else if (sel == "roofline") {
      std::vector<RooflinePoint> pts;
      for (double ai : ai_samples(ai_lo, ai_hi, ai_points))
        pts.push_back(roofline(s.machine, ai));
      emit_artifact("roofline", sel, curve_table(pts, fmt));
      if (has_method) {
        std::vector<std::pair<std::string, RooflinePoint>> kpts;
        for (const auto& p : phases) {
          if (p.phase == "total" || p.n_mem_bytes <= 0) continue;
          kpts.emplace_back(p.phase, roofline(s.machine, kernel_ai(p)));
        }
        emit_artifact("roofline_kernels", sel, kernel_points_table(kpts, fmt));
      }
    } else if (sel == "energy" && s.energy) {
      std::vector<std::pair<double, double>> pts;
      for (double ai : ai_samples(ai_lo, ai_hi, ai_points))
        pts.emplace_back(ai, energy_roofline(*s.energy, s.machine, ai));
      emit_artifact("energy", sel, energy_curve_table(pts, fmt));
      if (has_method) {
        std::vector<std::pair<std::string, double>> rows;
        for (const auto& p : phases) {
          double t = total_time(p, s.overlap);
          rows.emplace_back(p.phase, energy(*s.energy, p.n_flop, p.n_mem_bytes, t));
        }
        emit_artifact("energy_kernels", sel, energy_kernels_table(rows, fmt));
      }
    } else if (sel == "project" && !s.doubling_times.empty()) {
      MachineProjection proj = project_machine(s.machine, s.doubling_times, horizon);
      emit_artifact("projection", sel, projection_table(proj.rows, fmt));
      std::string file = "projected_machine.json";
      write_file_atomic((fs::path(out_dir) / file).string(), serialize_machine(proj.machine));
      artifacts.push_back({file, sel});
    } else if (sel == "resilience" && s.resilience && has_method) {
      VulnerabilityReport rep =
          vulnerability_report(s.machine, s.method, *s.resilience, s.overlap);
      emit_artifact("resilience", sel, resilience_table(rep, fmt));
    }
  }

  json manifest;
  manifest["scenario"] = s.machine.name;
  manifest["generated_at"] = static_cast<long long>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch()).count());
  json inputs = json::array();
  for (const auto& f : s.source_files) {
    inputs.push_back({{"file", f}, {"digest", file_digest(f)}});
  }
  manifest["inputs"] = inputs;
  json arts = json::array();
  for (const auto& a : artifacts) arts.push_back({{"file", a.file}, {"selector", a.selector}});
  manifest["artifacts"] = arts;
  write_file_atomic((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  return artifacts;
}

}  // namespace exaperf
