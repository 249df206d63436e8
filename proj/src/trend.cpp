#include "exaperf/trend.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "exaperf/errors.hpp"

namespace exaperf {

double fit_doubling_time(const TrendSeries& s) {
  const auto& pts = s.points;
  if (pts.size() < 2)
    throw ModelError(ModelError::Kind::DegenerateSeries, "trend series needs at least 2 points");
  double first_year = pts.front().first;
  bool distinct = false;
  for (const auto& [y, v] : pts) {
    if (y != first_year) distinct = true;
    if (!(v > 0))
      throw ModelError(ModelError::Kind::DegenerateSeries, "trend values must be positive");
  }
  if (!distinct)
    throw ModelError(ModelError::Kind::DegenerateSeries, "trend series needs 2 distinct years");

  // Centered OLS of log2(value) on year keeps the normal equations well
  // conditioned for calendar-year abscissae.
  double my = 0, mv = 0;
  for (const auto& [y, v] : pts) { my += y; mv += std::log2(v); }
  my /= pts.size();
  mv /= pts.size();
  double sxy = 0, sxx = 0;
  for (const auto& [y, v] : pts) {
    double dy = y - my;
    sxy += dy * (std::log2(v) - mv);
    sxx += dy * dy;
  }
  double slope = sxy / sxx;  // doublings per year
  if (!(slope > 0)) return std::numeric_limits<double>::infinity();
  return 1.0 / slope;
}

ProjectionRow project(const std::string& parameter, double base_value,
                      double doubling_time, double horizon) {
  if (horizon < 0)
    throw ModelError(ModelError::Kind::InvalidHorizon, "projection horizon must be nonnegative");
  ProjectionRow row;
  row.parameter = parameter;
  row.base_value = base_value;
  row.doubling_time = doubling_time;
  row.horizon = horizon;
  row.increase_factor = std::isinf(doubling_time) ? 1.0 : std::exp2(horizon / doubling_time);
  row.projected_value = base_value * row.increase_factor;
  return row;
}

MachineProjection project_machine(const MachineSpec& base,
                                  const std::map<std::string, double>& doubling_times,
                                  double horizon, bool require_complete) {
  MachineProjection out;
  out.machine = base;
  out.machine.name = base.name.empty() ? "projected" : base.name + "+" +
                     std::to_string(static_cast<long long>(std::llround(horizon))) + "y";

  // Rate/capacity view of the machine.
  struct Field { const char* key; double base; };
  const Field fields[] = {
      {"peak", base.peak_flops()},
      {"mem_bandwidth", 1.0 / base.beta_mem},
      {"link_bandwidth", 1.0 / base.beta_link},
      {"cores", base.cores},
      {"fast_memory", base.Z},
      {"line_size", base.L},
      {"processors", base.P},
      {"pcie_bandwidth", base.beta_pcie > 0 ? 1.0 / base.beta_pcie : 0.0},
  };

  std::map<std::string, double> factor;
  for (const auto& f : fields) {
    auto it = doubling_times.find(f.key);
    if (it == doubling_times.end()) {
      if (require_complete && !(std::string(f.key) == "pcie_bandwidth" && base.beta_pcie == 0))
        throw ModelError(ModelError::Kind::MissingDoublingTime,
                         std::string("no doubling time for '") + f.key + "'");
      factor[f.key] = 1.0;
      continue;
    }
    ProjectionRow row = project(f.key, f.base, it->second, horizon);
    factor[f.key] = row.increase_factor;
    out.rows.push_back(row);
  }

  MachineSpec& m = out.machine;
  double peak = base.peak_flops() * factor["peak"];
  m.cores = base.cores * factor["cores"];
  m.t_c = m.cores / peak;
  m.beta_mem = base.beta_mem / factor["mem_bandwidth"];
  m.beta_link = base.beta_link / factor["link_bandwidth"];
  if (base.beta_pcie > 0) m.beta_pcie = base.beta_pcie / factor["pcie_bandwidth"];
  m.Z = base.Z * factor["fast_memory"];
  m.L = base.L * factor["line_size"];
  m.P = base.P * factor["processors"];
  return out;
}

TrendSeries load_trend_csv(const std::string& path, const std::string& metric) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  TrendSeries s;
  s.metric = metric;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string ycol, vcol;
    if (!std::getline(ls, ycol, ',') || !std::getline(ls, vcol)) continue;
    char* end = nullptr;
    double y = std::strtod(ycol.c_str(), &end);
    if (end == ycol.c_str()) {
      if (lineno == 1) continue;  // header row
      throw parse_error(path + ":" + std::to_string(lineno), "expected year,value");
    }
    double v = std::strtod(vcol.c_str(), &end);
    if (end == vcol.c_str())
      throw parse_error(path + ":" + std::to_string(lineno), "expected year,value");
    if (!s.points.empty() && y <= s.points.back().first)
      throw parse_error(path + ":" + std::to_string(lineno), "years must be strictly increasing");
    s.points.emplace_back(y, v);
  }
  return s;
}

}  // namespace exaperf
