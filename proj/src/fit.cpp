#include "onsager/fit.hpp"

#include "onsager/error.hpp"

namespace onsager::fit {

Line weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  if (x.size() < 2 || x.size() != y.size() || x.size() != w.size()) throw ValidationError("line fit needs >= 2 points");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("line fit abscissae are degenerate");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  return weighted_line(x, y, std::vector<double>(x.size(), 1.0)).slope;
}

}  // namespace onsager::fit
