#include "cli/metric_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "cli/common.hpp"

namespace mixlens::cli {
namespace {

template <typename T>
bool parse_number(const std::string& s, T& value) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string render_metric_csv(const std::vector<MetricRow>& rows, const std::string& digest) {
  std::string out = "# config_digest=" + digest + "\n";
  out += kMetricHeader;
  out += '\n';
  for (const MetricRow& r : rows) {
    out += r.variant + ',' + r.explainer + ',' + std::to_string(r.n) + ',' +
           format_number(r.maelosd) + ',' + std::to_string(r.num_instances) + ',' +
           std::to_string(r.num_degenerate) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

MetricCsv read_metric_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError(kBadReportInput, "cannot read " + path.string());
  MetricCsv csv;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto bad = [&](const std::string& why) {
    return ExitError(kBadReportInput,
                     path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# config_digest=";
      if (line.starts_with(key)) csv.digest = line.substr(key.size());
      continue;
    }
    if (!header_seen) {
      if (line != kMetricHeader) throw bad("expected header '" + std::string(kMetricHeader) + "'");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> fields = [&] {
      std::vector<std::string> f;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return f;
    }();
    if (fields.size() != 7) throw bad("expected 7 fields, found " + std::to_string(fields.size()));
    MetricRow row;
    row.variant = fields[0];
    row.explainer = fields[1];
    if (row.variant.empty() || row.explainer.empty()) throw bad("empty variant or explainer");
    if (!parse_number(fields[2], row.n)) throw bad("invalid n '" + fields[2] + "'");
    if (!parse_number(fields[3], row.maelosd) || !std::isfinite(row.maelosd) || row.maelosd < 0.0) {
      throw bad("invalid maelosd '" + fields[3] + "'");
    }
    if (!parse_number(fields[4], row.num_instances)) throw bad("invalid num_instances '" + fields[4] + "'");
    if (!parse_number(fields[5], row.num_degenerate)) throw bad("invalid num_degenerate '" + fields[5] + "'");
    if (!parse_number(fields[6], row.seed)) throw bad("invalid seed '" + fields[6] + "'");
    csv.rows.push_back(std::move(row));
  }
  if (!header_seen) throw ExitError(kBadReportInput, path.string() + ": empty metric CSV (no header)");
  if (csv.rows.empty()) throw ExitError(kBadReportInput, path.string() + ": metric CSV has no rows");
  return csv;
}

}  // namespace mixlens::cli
