#include "gridwatch/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gridwatch::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string scatter(const std::vector<Point>& points, const std::string& title) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 480.0;
  constexpr double kMargin = 40.0;

  double lat_min = std::numeric_limits<double>::infinity();
  double lat_max = -lat_min;
  double lon_min = lat_min;
  double lon_max = -lat_min;
  for (const auto& p : points) {
    lat_min = std::min(lat_min, p.latitude);
    lat_max = std::max(lat_max, p.latitude);
    lon_min = std::min(lon_min, p.longitude);
    lon_max = std::max(lon_max, p.longitude);
  }
  if (points.empty()) lat_min = lat_max = lon_min = lon_max = 0.0;
  const double lat_span = std::max(lat_max - lat_min, 1e-9);
  const double lon_span = std::max(lon_max - lon_min, 1e-9);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(title) + "</text>\n";
  for (const auto& p : points) {
    const double x = kMargin + (p.longitude - lon_min) / lon_span * (kWidth - 2 * kMargin);
    const double y = kHeight - kMargin - (p.latitude - lat_min) / lat_span * (kHeight - 2 * kMargin);
    out += "<circle cx=\"" + fixed(x) + "\" cy=\"" + fixed(y) + "\" r=\"6\" fill=\"" + p.fill +
           "\" stroke=\"black\" stroke-width=\"0.5\">";
    if (!p.tooltip.empty()) out += "<title>" + escape(p.tooltip) + "</title>";
    out += "</circle>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string cluster_color(int k) {
  static constexpr std::array<const char*, 10> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
  };
  return kPalette[static_cast<std::size_t>(std::abs(k)) % kPalette.size()];
}

std::string heat_color(double score, double max_score) {
  double t = max_score > 0 ? std::clamp(score / max_score, 0.0, 1.0) : 0.0;
  struct Rgb {
    double r, g, b;
  };
  constexpr Rgb kLow{49, 54, 149};
  constexpr Rgb kMid{255, 255, 191};
  constexpr Rgb kHigh{165, 0, 38};
  const Rgb& a = t < 0.5 ? kLow : kMid;
  const Rgb& b = t < 0.5 ? kMid : kHigh;
  const double u = t < 0.5 ? t * 2.0 : (t - 0.5) * 2.0;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(a.r + u * (b.r - a.r))),
                static_cast<int>(std::lround(a.g + u * (b.g - a.g))),
                static_cast<int>(std::lround(a.b + u * (b.b - a.b))));
  return buf;
}

}  // namespace gridwatch::svg
