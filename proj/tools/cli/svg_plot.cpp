#include "cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace mixlens::cli {
namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 300.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 48.0;

std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color_for(const std::string& explainer, std::size_t ordinal) {
  if (explainer == "lime") return "#1f77b4";
  if (explainer == "shap") return "#d62728";
  if (explainer == "random") return "#7f7f7f";
  static const char* kPalette[] = {"#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return kPalette[ordinal % 5];
}

// Rounds the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (!(v > 0.0)) return 1.0;
  const double base = std::pow(10.0, std::floor(std::log10(v)));
  for (double step : {1.0, 2.0, 5.0, 10.0}) {
    if (step * base >= v) return step * base;
  }
  return 10.0 * base;
}

}  // namespace

std::string panel_title(const std::string& variant) {
  if (variant == "sentence") return "MAELOSD-Sentence";
  if (variant == "model") return "MAELOSD-Model";
  if (variant == "codemixed") return "MAELOSD-CodeMixed";
  if (variant == "random_baseline") return "Random deletion";
  return "MAELOSD-" + variant;
}

std::string render_svg(const std::vector<Panel>& panels, const std::string& digest) {
  const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- config_digest=" + digest + " -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" +
         fixed(kPanelHeight, 0) + "\" viewBox=\"0 0 " + fixed(width, 0) + " " +
         fixed(kPanelHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double x0 = kPanelWidth * static_cast<double>(p);
    const double plot_w = kPanelWidth - kLeft - kRight;
    const double plot_h = kPanelHeight - kTop - kBottom;

    std::set<std::size_t> ns;
    double y_max = 0.0;
    for (const auto& [name, points] : panel.series) {
      for (const auto& [n, v] : points) {
        ns.insert(n);
        y_max = std::max(y_max, v);
      }
    }
    y_max = nice_ceiling(y_max);
    const double n_lo = ns.empty() ? 0.0 : static_cast<double>(*ns.begin());
    const double n_hi = ns.empty() ? 1.0 : static_cast<double>(*ns.rbegin());
    const double n_span = n_hi > n_lo ? n_hi - n_lo : 1.0;
    auto sx = [&](double n) {
      const double t = n_hi > n_lo ? (n - n_lo) / n_span : 0.5;
      return x0 + kLeft + t * plot_w;
    };
    auto sy = [&](double v) { return kTop + plot_h - (v / y_max) * plot_h; };

    svg += "<g class=\"panel\" id=\"panel-" + escape(panel.variant) + "\">\n";
    svg += "<text x=\"" + fixed(x0 + kLeft + plot_w / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-size=\"13\" font-weight=\"bold\">(" + std::string(1, static_cast<char>('a' + p)) +
           ") " + escape(panel_title(panel.variant)) + "</text>\n";
    svg += "<rect x=\"" + fixed(x0 + kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(plot_w) +
           "\" height=\"" + fixed(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int i = 0; i <= 4; ++i) {
      const double v = y_max * i / 4.0;
      const double y = sy(v);
      svg += "<line x1=\"" + fixed(x0 + kLeft) + "\" y1=\"" + fixed(y) + "\" x2=\"" +
             fixed(x0 + kLeft + plot_w) + "\" y2=\"" + fixed(y) + "\" stroke=\"#ddd\"/>\n";
      svg += "<text x=\"" + fixed(x0 + kLeft - 6) + "\" y=\"" + fixed(y + 4) +
             "\" text-anchor=\"end\">" + fixed(v, 3) + "</text>\n";
    }
    for (std::size_t n : ns) {
      svg += "<text x=\"" + fixed(sx(static_cast<double>(n))) + "\" y=\"" +
             fixed(kTop + plot_h + 16) + "\" text-anchor=\"middle\">" + std::to_string(n) + "</text>\n";
    }
    svg += "<text x=\"" + fixed(x0 + kLeft + plot_w / 2) + "\" y=\"" + fixed(kPanelHeight - 12) +
           "\" text-anchor=\"middle\">n (words deleted)</text>\n";
    svg += "<text transform=\"translate(" + fixed(x0 + 14) + "," + fixed(kTop + plot_h / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">MAELOSD</text>\n";

    std::size_t ordinal = 0;
    for (const auto& [name, points] : panel.series) {
      const std::string color = color_for(name, ordinal);
      std::string coords;
      for (const auto& [n, v] : points) {
        if (!coords.empty()) coords += ' ';
        coords += fixed(sx(static_cast<double>(n))) + "," + fixed(sy(v));
      }
      const std::string dash = name == "random" ? " stroke-dasharray=\"5,4\"" : "";
      svg += "<polyline class=\"series\" data-explainer=\"" + escape(name) + "\" points=\"" + coords +
             "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" + dash + "/>\n";
      for (const auto& [n, v] : points) {
        svg += "<circle cx=\"" + fixed(sx(static_cast<double>(n))) + "\" cy=\"" + fixed(sy(v)) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
      const double ly = kTop + 14.0 + 14.0 * static_cast<double>(ordinal);
      const double lx = x0 + kLeft + 8.0;
      svg += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" + fixed(lx + 18) +
             "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" + dash + "/>\n";
      svg += "<text x=\"" + fixed(lx + 22) + "\" y=\"" + fixed(ly) + "\">" + escape(name) + "</text>\n";
      ++ordinal;
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_table(const std::vector<Panel>& panels, const std::string& digest) {
  std::string out = "# config_digest=" + digest + "\n";
  for (const Panel& panel : panels) {
    out += "\n" + panel_title(panel.variant) + "\n";
    std::set<std::size_t> ns;
    for (const auto& [name, points] : panel.series) {
      for (const auto& [n, v] : points) ns.insert(n);
    }
    std::string header = "n   ";
    for (const auto& [name, points] : panel.series) {
      std::string col = name;
      col.resize(std::max<std::size_t>(col.size(), 12), ' ');
      header += "  " + col;
    }
    while (!header.empty() && header.back() == ' ') header.pop_back();
    out += header + "\n";
    for (std::size_t n : ns) {
      std::string line = std::to_string(n);
      line.resize(4, ' ');
      for (const auto& [name, points] : panel.series) {
        const auto it = points.find(n);
        std::string cell = it == points.end() ? "-" : fixed(it->second, 6);
        cell.resize(std::max<std::size_t>(name.size(), 12), ' ');
        line += "  " + cell;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace mixlens::cli
