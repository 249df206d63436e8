#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "exaperf/machine.hpp"

namespace exaperf {

// Historical metric samples: (year, value), years strictly increasing,
// values positive.
struct TrendSeries {
  std::string metric;
  std::vector<std::pair<double, double>> points;
};

struct ProjectionRow {
  std::string parameter;
  double base_value = 0.0;
  double doubling_time = 0.0;  // years; +inf means no growth
  double horizon = 0.0;        // years
  double increase_factor = 1.0;
  double projected_value = 0.0;
};

// Ordinary least squares of log2(value) against year; returns 1/slope.
// Non-positive slope yields +infinity (no doubling). Throws
// ModelError{DegenerateSeries} on fewer than two distinct years.
double fit_doubling_time(const TrendSeries& s);

// increase_factor = 2^(horizon/doubling_time). Throws InvalidHorizon on
// a negative horizon.
ProjectionRow project(const std::string& parameter, double base_value,
                      double doubling_time, double horizon);

// Parameter names for the machine-level doubling-time map.
inline constexpr const char* kScaledParameters[] = {
    "peak", "mem_bandwidth", "link_bandwidth", "cores",
    "fast_memory", "line_size", "processors", "pcie_bandwidth",
};

struct MachineProjection {
  MachineSpec machine;
  std::vector<ProjectionRow> rows;  // one per scaled parameter, input order
};

// Scales the rate/capacity view of the machine (peak, bandwidths, cores,
// Z, L, P) by each parameter's increase factor; the stored inverse-time
// fields come back out of the scaled rates (t_c from projected peak and
// cores). Parameters absent from the map are copied unchanged unless
// `require_complete` is set, in which case MissingDoublingTime names the
// first absent one.
MachineProjection project_machine(const MachineSpec& base,
                                  const std::map<std::string, double>& doubling_times,
                                  double horizon, bool require_complete = false);

// CSV with columns year,value (a header row is skipped if present).
TrendSeries load_trend_csv(const std::string& path, const std::string& metric);

}  // namespace exaperf
