#pragma once

#include <string>
#include <vector>

#include "glcorner/geometry.hpp"

namespace glcorner {

// Heatmap of a P1 field, rasterized to `pixels` columns (rows follow the aspect
// ratio) with 64 colour levels and a colour bar. Uncovered pixels stay blank.
std::string svg_heatmap(const std::vector<Vec2>& nodes, const std::vector<std::array<int, 3>>& tris,
                        const std::vector<double>& values, const std::string& title, int pixels = 360);

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool markers = true;
  bool dashed = false;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<std::string> notes;  // printed under the title
};

std::string svg_lines(const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace glcorner
