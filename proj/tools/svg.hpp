#pragma once

#include <string>
#include <vector>

namespace fpsa::cli {

struct SvgSeries {
  std::string name;
  std::vector<double> y;
};

/// Self-contained SVG with one stacked panel per series over a shared x axis.
/// Long series are reduced to per-pixel min/max so narrow spikes survive.
std::string svg_traces(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                       const std::vector<SvgSeries>& series);

}  // namespace fpsa::cli
