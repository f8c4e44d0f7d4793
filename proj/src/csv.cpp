#include "onsager/csv.hpp"

#include <cmath>
#include <cstdio>

#include "onsager/error.hpp"

namespace onsager::csv {

Writer::Writer(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  row(header);
}

std::string Writer::format(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Writer::row(std::initializer_list<double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  row(cells);
}

void Writer::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ValidationError("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

}  // namespace onsager::csv
