#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace onsager::csv {

/// Minimal CSV emitter; doubles are written with %.17g so files round-trip.
class Writer {
 public:
  Writer(std::ostream& out, std::vector<std::string> header);
  void row(std::initializer_list<double> values);
  void row(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace onsager::csv
