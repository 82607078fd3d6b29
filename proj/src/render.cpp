#include "morphoevo/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "morphoevo/serialize.hpp"

namespace morphoevo {

namespace {

struct Cell {
  int count = 0;
  ModuleKind kind = ModuleKind::Core;
};

std::map<std::pair<int, int>, Cell> project(const MorphologyTree& tree) {
  std::map<std::pair<int, int>, Cell> cells;
  for (const auto& m : tree.modules()) {
    Cell& c = cells[{m.position[0], m.position[1]}];
    ++c.count;
    c.kind = m.kind;
  }
  return cells;
}

char glyph(const Cell& c) {
  if (c.count > 1) return '*';
  switch (c.kind) {
    case ModuleKind::Core: return 'C';
    case ModuleKind::Brick: return 'B';
    case ModuleKind::ActiveHinge: return 'H';
  }
  return '?';
}

const char* fill(const Cell& c) {
  if (c.count > 1) return "#7b5ea7";
  switch (c.kind) {
    case ModuleKind::Core: return "#d9a400";
    case ModuleKind::Brick: return "#4a7bd0";
    case ModuleKind::ActiveHinge: return "#d04a4a";
  }
  return "#888888";
}

void bounds(const std::map<std::pair<int, int>, Cell>& cells, int& min_x, int& max_x, int& min_y, int& max_y) {
  min_x = max_x = min_y = max_y = 0;
  for (const auto& [xy, c] : cells) {
    min_x = std::min(min_x, xy.first);
    max_x = std::max(max_x, xy.first);
    min_y = std::min(min_y, xy.second);
    max_y = std::max(max_y, xy.second);
  }
}

}  // namespace

std::string render_ascii(const MorphologyTree& tree) {
  const auto cells = project(tree);
  int min_x, max_x, min_y, max_y;
  bounds(cells, min_x, max_x, min_y, max_y);
  std::string out;
  for (int y = max_y; y >= min_y; --y) {
    for (int x = min_x; x <= max_x; ++x) {
      auto it = cells.find({x, y});
      out += it == cells.end() ? '.' : glyph(it->second);
    }
    out += '\n';
  }
  return out;
}

std::string render_svg(const MorphologyTree& tree) {
  constexpr int kCell = 40;
  const auto cells = project(tree);
  int min_x, max_x, min_y, max_y;
  bounds(cells, min_x, max_x, min_y, max_y);
  const int w = (max_x - min_x + 1) * kCell;
  const int h = (max_y - min_y + 1) * kCell;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\">\n";
  for (const auto& [xy, c] : cells) {
    const int px = (xy.first - min_x) * kCell;
    const int py = (max_y - xy.second) * kCell;
    svg << "  <rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << kCell << "\" height=\"" << kCell
        << "\" fill=\"" << fill(c) << "\" stroke=\"#222\"/>\n";
    svg << "  <text x=\"" << px + kCell / 2 << "\" y=\"" << py + kCell / 2 + 5
        << "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">" << glyph(c) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  double lo = 0.0, hi = 0.0;
  std::size_t n = 0;
  bool any = false;
  for (const auto& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
    n = std::max(n, s.y.size());
  }
  if (!any || hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  auto sx = [&](std::size_t i) { return kLeft + (n > 1 ? plot_w * static_cast<double>(i) / (n - 1) : plot_w / 2); };
  auto sy = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label << "</text>\n";
  svg << "  <text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << y_label << "</text>\n";
  svg << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_double(hi) << "</text>\n";
  svg << "  <text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_double(lo) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].y.size(); ++i) {
      if (std::isfinite(series[s].y[i])) svg << sx(i) << ',' << sy(series[s].y[i]) << ' ';
    }
    svg << "\"/>\n";
    svg << "  <text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 + 14 * static_cast<double>(s) << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace morphoevo
