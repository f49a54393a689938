#include <algorithm>
#include <ostream>

#include "cli/common.hpp"
#include "cli/metric_csv.hpp"
#include "cli/svg_plot.hpp"

namespace mixlens::cli {

int cmd_report(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Render metric CSVs as a multi-panel SVG and a text table", "mixlens report"};
  std::vector<std::string> inputs;
  std::string svg_path = "maelosd.svg";
  std::string table_path;
  app.add_option("csv", inputs, "Metric CSV files written by 'mixlens eval'")->required();
  app.add_option("--svg", svg_path, "SVG figure to write");
  app.add_option("--table", table_path, "Write the summary table here instead of stdout");
  if (auto code = parse_args(app, args, out, err)) return *code;

  // Panels in the fixed order of the figure; the random baseline is overlaid
  // on every panel rather than getting its own.
  static const std::vector<std::string> kOrder = {"sentence", "model", "codemixed"};
  std::map<std::string, Series> by_variant;
  Series baseline;
  std::string digest_source;
  for (const auto& path : inputs) {
    const MetricCsv csv = read_metric_csv(path);
    digest_source += csv.digest + ";";
    for (const MetricRow& row : csv.rows) {
      Series& target = row.variant == "random_baseline" ? baseline : by_variant[row.variant];
      auto& points = target[row.explainer];
      if (points.contains(row.n) && points[row.n] != row.maelosd) {
        err << "warning: " << path << ": " << row.variant << "/" << row.explainer << " n=" << row.n
            << " repeated with a different value; keeping the last\n";
      }
      points[row.n] = row.maelosd;
    }
  }

  std::vector<Panel> panels;
  for (const auto& name : kOrder) {
    if (by_variant.contains(name)) panels.push_back({name, by_variant[name]});
  }
  for (const auto& [name, series] : by_variant) {
    if (std::find(kOrder.begin(), kOrder.end(), name) == kOrder.end()) panels.push_back({name, series});
  }
  if (panels.empty()) {
    panels.push_back({"random_baseline", baseline});
  } else {
    for (Panel& p : panels) {
      for (const auto& [name, points] : baseline) p.series[name] = points;
    }
  }

  const std::string digest = text_digest("report;" + digest_source);
  write_file(svg_path, render_svg(panels, digest));
  const std::string table = render_table(panels, digest);
  if (table_path.empty()) {
    out << table;
  } else {
    write_file(table_path, table);
  }
  out << "wrote " << svg_path << " with " << panels.size() << " panel"
      << (panels.size() == 1 ? "" : "s") << "\n";
  return kOk;
}

}  // namespace mixlens::cli
