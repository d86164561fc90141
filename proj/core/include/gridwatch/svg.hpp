#pragma once

#include <string>
#include <vector>

namespace gridwatch::svg {

struct Point {
  double latitude = 0.0;
  double longitude = 0.0;
  std::string fill;     // CSS color, e.g. "#1f77b4"
  std::string tooltip;  // rendered as <title>
};

/// Scatter of stations in longitude/latitude space.
std::string scatter(const std::vector<Point>& points, const std::string& title);

/// Distinct color for cluster k (cycles after ten).
std::string cluster_color(int k);

/// Three-stop ramp (blue, yellow, red) over [0, max_score].
std::string heat_color(double score, double max_score);

}  // namespace gridwatch::svg
