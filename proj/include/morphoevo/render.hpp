#pragma once

#include <string>
#include <vector>

#include "morphoevo/morphology.hpp"

namespace morphoevo {

/// Top-down (x, y) view, +y up. C core, B brick, H hinge, '*' for a cell
/// holding several stacked modules.
std::string render_ascii(const MorphologyTree& tree);
std::string render_svg(const MorphologyTree& tree);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Minimal static line chart; x is the sample index.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

}  // namespace morphoevo
