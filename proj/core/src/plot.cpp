#include "pb/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pb/errors.hpp"

namespace pb {
namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMarginL = 70;
constexpr int kMarginR = 130;
constexpr int kMarginT = 40;
constexpr int kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(5);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_plot(
    const std::string& path, const std::string& title,
    const std::string& xlabel, const std::vector<double>& xs,
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  if (xs.empty() || series.empty())
    throw ValidationError("svg plot: empty data");

  double xmin = xs.front(), xmax = xs.back();
  if (xmax <= xmin) xmax = xmin + 1.0;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto& [name, ys] : series) {
    if (ys.size() != xs.size())
      throw ValidationError("svg plot: series '" + name + "' length mismatch");
    for (double y : ys)
      if (std::isfinite(y)) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
  }
  if (!(ymax > ymin)) {
    const double pad = std::abs(ymin) > 0 ? 0.1 * std::abs(ymin) : 1.0;
    ymax = ymin + pad;
    ymin -= pad;
  }

  const double pw = kWidth - kMarginL - kMarginR;
  const double ph = kHeight - kMarginT - kMarginB;
  auto px = [&](double x) {
    return kMarginL + pw * (x - xmin) / (xmax - xmin);
  };
  auto py = [&](double y) {
    return kMarginT + ph * (1.0 - (y - ymin) / (ymax - ymin));
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";

  // Frame and tick labels (corners only; enough to read scales off).
  os << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
     << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - 18
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xmin)
     << "</text>\n";
  os << "<text x=\"" << kMarginL + pw << "\" y=\"" << kHeight - 18
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << fmt(xmax) << "</text>\n";
  os << "<text x=\"" << kMarginL + pw / 2 << "\" y=\"" << kHeight - 18
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << xlabel << "</text>\n";
  os << "<text x=\"" << kMarginL - 6 << "\" y=\"" << kMarginT + 10
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << fmt(ymax) << "</text>\n";
  os << "<text x=\"" << kMarginL - 6 << "\" y=\"" << kMarginT + ph
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
     << fmt(ymin) << "</text>\n";

  int ci = 0;
  for (const auto& [name, ys] : series) {
    const char* color = kPalette[ci % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double y = ys[i];
      if (!std::isfinite(y)) y = ymin;
      os << fmt(px(xs[i])) << "," << fmt(py(y)) << " ";
    }
    os << "\"/>\n";
    const int ly = kMarginT + 14 + 16 * ci;
    os << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << ly
       << "\" x2=\"" << kWidth - kMarginR + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kWidth - kMarginR + 35 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << name
       << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";

  std::ofstream f(path);
  if (!f) throw ValidationError("svg plot: cannot open '" + path + "'");
  f << os.str();
}

}  // namespace pb
