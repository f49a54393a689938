#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mixlens::cli {

inline constexpr const char* kMetricHeader =
    "variant,explainer,n,maelosd,num_instances,num_degenerate,seed";

struct MetricRow {
  std::string variant;
  std::string explainer;
  std::size_t n = 0;
  double maelosd = 0.0;
  std::size_t num_instances = 0;
  std::size_t num_degenerate = 0;
  std::uint64_t seed = 0;
};

/// `# config_digest=<hex>` line, the fixed header, then one line per row.
std::string render_metric_csv(const std::vector<MetricRow>& rows, const std::string& digest);

struct MetricCsv {
  std::vector<MetricRow> rows;
  std::string digest;
};

/// Lines starting with '#' are comments. Throws ExitError(kBadReportInput)
/// naming the file and line for anything malformed.
MetricCsv read_metric_csv(const std::filesystem::path& path);

}  // namespace mixlens::cli
