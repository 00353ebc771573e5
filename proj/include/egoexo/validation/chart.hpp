#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "egoexo/validation/reprojection.hpp"

namespace egoexo::validation {

struct ChartSeries {
  std::string label;
  ErrorCurve curve;
};

/// Mean error (solid) and max error (dashed) against f, as standalone SVG.
void write_error_chart_svg(std::ostream& out, const std::vector<ChartSeries>& series,
                           const std::string& title);

}  // namespace egoexo::validation
