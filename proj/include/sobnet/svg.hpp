#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sobnet {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Shaded region between lo(x) and hi(x).
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
};

struct Chart {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logy = false;
  bool logx = false;
  bool scatter = false;
  std::vector<Series> series;
  std::optional<Band> band;
};

/// Self-contained SVG 1.1 document. Output depends only on the chart data,
/// so identical input gives byte-identical output.
std::string render_svg(const Chart& chart);

}  // namespace sobnet
