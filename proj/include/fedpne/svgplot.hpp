#pragma once
#include <string>
#include <vector>

namespace fedpne {

struct PlotSeries {
  std::string label;
  std::vector<double> mean;    // per round, round = index + 1
  std::vector<double> stddev;  // same length, or empty for no band
};

// Static 800x500 SVG: one line per series plus a +-1 stddev band at 0.25
// opacity. Pure function of its inputs, so identical inputs give
// byte-identical files.
std::string render_regret_svg(const std::vector<PlotSeries>& series);
void render_regret_plot(const std::vector<PlotSeries>& series, const std::string& path);

} // namespace fedpne
