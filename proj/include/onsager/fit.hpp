#pragma once

#include <vector>

namespace onsager::fit {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Weighted least-squares line through (x, y). Throws ValidationError with
/// fewer than two points or degenerate abscissae.
Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w);
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace onsager::fit
