#pragma once

#include <map>
#include <string>
#include <vector>

namespace mixlens::cli {

/// One line in a panel: explainer name -> (n -> value).
using Series = std::map<std::string, std::map<std::size_t, double>>;

struct Panel {
  std::string variant;
  Series series;
};

/// Side-by-side panels, x = n, y = MAELOSD, one polyline per explainer.
/// The "random" series is drawn dashed in grey.
std::string render_svg(const std::vector<Panel>& panels, const std::string& digest);

/// Plain-text table per panel with one column per explainer.
std::string render_table(const std::vector<Panel>& panels, const std::string& digest);

std::string panel_title(const std::string& variant);

}  // namespace mixlens::cli
