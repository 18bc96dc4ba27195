#include "fedpne/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedpne {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 780, kTop = 20, kBottom = 450;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

} // namespace

std::string render_regret_svg(const std::vector<PlotSeries>& series) {
  if (series.empty()) throw std::runtime_error("nothing to plot: no series given");
  size_t max_len = 0;
  double ymin = 0, ymax = 0;
  bool any = false;
  for (const PlotSeries& s : series) {
    if (s.mean.empty()) throw std::runtime_error("series '" + s.label + "' is empty");
    if (!s.stddev.empty() && s.stddev.size() != s.mean.size())
      throw std::runtime_error("series '" + s.label + "' has mismatched stddev length");
    max_len = std::max(max_len, s.mean.size());
    for (size_t t = 0; t < s.mean.size(); ++t) {
      double sd = s.stddev.empty() ? 0.0 : s.stddev[t];
      double lo = s.mean[t] - sd, hi = s.mean[t] + sd;
      if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::runtime_error("series '" + s.label + "' has non-finite values");
      if (!any) { ymin = lo; ymax = hi; any = true; }
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  ymin = std::min(ymin, 0.0);
  if (ymax <= ymin) ymax = ymin + 1.0;
  double xmax = (double)max_len;

  auto X = [&](double round) {
    double frac = max_len > 1 ? (round - 1.0) / (xmax - 1.0) : 0.5;
    return kLeft + frac * (kRight - kLeft);
  };
  auto Y = [&](double v) {
    return kBottom - (v - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (int)kWidth
      << "\" height=\"" << (int)kHeight << "\" viewBox=\"0 0 " << (int)kWidth << " "
      << (int)kHeight << "\">\n"
      << "<rect width=\"" << (int)kWidth << "\" height=\"" << (int)kHeight
      << "\" fill=\"white\"/>\n";

  // frame and ticks
  svg << "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n"
      << "<path d=\"M " << px(kLeft) << " " << px(kTop) << " L " << px(kLeft) << " "
      << px(kBottom) << " L " << px(kRight) << " " << px(kBottom) << "\"/>\n</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
  const int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    double v = 1.0 + (xmax - 1.0) * i / kTicks;
    if (max_len == 1) v = 1.0;
    double x = X(v);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(kBottom) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(kBottom + 5) << "\" stroke=\"#333333\"/>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << px(kBottom + 18)
        << "\" text-anchor=\"middle\">" << tick_label(std::round(v)) << "</text>\n";
    if (max_len == 1) break;
  }
  for (int i = 0; i <= kTicks; ++i) {
    double v = ymin + (ymax - ymin) * i / kTicks;
    double y = Y(v);
    svg << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(kLeft) << "\" y2=\"" << px(y) << "\" stroke=\"#333333\"/>\n"
        << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  svg << "<text x=\"" << px((kLeft + kRight) / 2) << "\" y=\"" << px(kHeight - 10)
      << "\" text-anchor=\"middle\">round</text>\n"
      << "<text x=\"15\" y=\"" << px((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << px((kTop + kBottom) / 2) << ")\">average cumulative regret</text>\n</g>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    if (!s.stddev.empty() && s.mean.size() > 1) {
      svg << "<path fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"none\" d=\"";
      for (size_t t = 0; t < s.mean.size(); ++t)
        svg << (t == 0 ? "M " : "L ") << px(X((double)t + 1)) << " "
            << px(Y(s.mean[t] - s.stddev[t])) << " ";
      for (size_t t = s.mean.size(); t-- > 0;)
        svg << "L " << px(X((double)t + 1)) << " " << px(Y(s.mean[t] + s.stddev[t]))
            << " ";
      svg << "Z\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t t = 0; t < s.mean.size(); ++t) {
      if (t) svg << ' ';
      svg << px(X((double)t + 1)) << ',' << px(Y(s.mean[t]));
    }
    svg << "\"/>\n";
  }

  // legend, top-left inside the frame
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
  for (size_t si = 0; si < series.size(); ++si) {
    double y = kTop + 16 + 18 * (double)si;
    svg << "<line x1=\"" << px(kLeft + 10) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(kLeft + 34) << "\" y2=\"" << px(y) << "\" stroke=\""
        << kPalette[si % kPaletteSize] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << px(kLeft + 40) << "\" y=\"" << px(y + 4) << "\">"
        << xml_escape(series[si].label) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void render_regret_plot(const std::vector<PlotSeries>& series, const std::string& path) {
  std::string body = render_regret_svg(series);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace fedpne
