#pragma once

#include <string>
#include <vector>

namespace cvxorder::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart: axes with min/max tick labels, a zero line when zero
/// is in range, one polyline per series and a legend.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::vector<Series>& series, int width = 640, int height = 420);

}  // namespace cvxorder::svg
