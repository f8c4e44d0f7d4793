#include "onsager/modulus.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "onsager/error.hpp"

namespace onsager {

Modulus Modulus::power(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ValidationError("power modulus needs theta > 0");
  return Modulus(Kind::kPower, theta);
}

Modulus Modulus::parse(const std::string& text) {
  if (text == "constant") return constant();
  if (text == "log") return log();
  const std::string prefix = "power:";
  if (text.rfind(prefix, 0) == 0) {
    std::istringstream in(text.substr(prefix.size()));
    double theta = 0.0;
    if (in >> theta && in.eof()) return power(theta);
  }
  throw ValidationError("unknown modulus '" + text + "' (expected constant, log, or power:<theta>)");
}

double Modulus::operator()(double s) const {
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kPower:
      return std::pow(s, theta_);
    case Kind::kLog:
      return 1.0 / std::log(std::numbers::e + 1.0 / s);
  }
  return 1.0;
}

std::string Modulus::name() const {
  switch (kind_) {
    case Kind::kConstant:
      return "constant";
    case Kind::kPower: {
      std::ostringstream out;
      out << "power:" << theta_;
      return out.str();
    }
    case Kind::kLog:
      return "log";
  }
  return "constant";
}

}  // namespace onsager
