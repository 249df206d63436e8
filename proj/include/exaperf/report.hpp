#pragma once

#include <string>
#include <vector>

#include "exaperf/analysis.hpp"
#include "exaperf/kernels.hpp"
#include "exaperf/resilience.hpp"
#include "exaperf/scenario.hpp"
#include "exaperf/trend.hpp"

namespace exaperf {

enum class Format { Csv, Json };

// Fixed column orders; numbers printed with %.9g. Every table here
// parses back losslessly at that precision via the parse_* helpers.
std::string cost_table(const std::string& method, const std::vector<CostBreakdown>& phases,
                       Format fmt);
std::string curve_table(const std::vector<RooflinePoint>& pts, Format fmt);
std::string energy_curve_table(const std::vector<std::pair<double, double>>& pts, Format fmt);
std::string energy_kernels_table(const std::vector<std::pair<std::string, double>>& rows,
                                 Format fmt);
std::string kernel_points_table(
    const std::vector<std::pair<std::string, RooflinePoint>>& pts, Format fmt);
std::string tier_curve_table(
    const std::vector<std::pair<std::string, RooflinePoint>>& pts, Format fmt);
std::string projection_table(const std::vector<ProjectionRow>& rows, Format fmt);
std::string resilience_table(const VulnerabilityReport& rep, Format fmt);

struct CompareColumn {
  std::string metric;               // t_mem / t_net / t_pcie / t_comm
  std::vector<double> values;       // one per scenario, input order
  std::string winner;               // machine name with the smallest value
};
struct Comparison {
  std::string method;
  std::vector<std::string> machines;
  std::vector<CompareColumn> columns;
};

// Side-by-side communication costs of >= 2 scenarios sharing a method.
// Throws ModelError{MixedMethods} otherwise.
Comparison compare(const std::vector<Scenario>& scenarios);
std::string compare_table(const Comparison& cmp, Format fmt);

// Minimal CSV readers for round-tripping emitted tables.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::vector<CostBreakdown> parse_cost_csv(const std::string& text);
std::vector<RooflinePoint> parse_curve_csv(const std::string& text);
std::vector<ProjectionRow> parse_projection_csv(const std::string& text);

// temp-file + rename
void write_file_atomic(const std::string& path, const std::string& content);

// FNV-1a over the file bytes, hex string; recorded in report manifests.
std::string file_digest(const std::string& path);

struct ReportArtifact {
  std::string file;
  std::string selector;
};

// Evaluates every applicable selector of the scenario into `out_dir` and
// writes a manifest.json naming each artifact with the input digests.
// The manifest carries the only timestamp; data files are byte-stable.
std::vector<ReportArtifact> run_report(const Scenario& s, const std::string& out_dir,
                                       Format fmt, double horizon,
                                       double ai_lo, double ai_hi, int ai_points);

}  // namespace exaperf
