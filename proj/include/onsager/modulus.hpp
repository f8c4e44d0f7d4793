#pragma once

#include <string>

namespace onsager {

/// Named modulus-of-continuity families: s^θ, 1/log(e + 1/s), or 1.
class Modulus {
 public:
  enum class Kind { kConstant, kPower, kLog };

  static Modulus constant() { return Modulus(Kind::kConstant, 0.0); }
  /// Throws ValidationError unless theta > 0.
  static Modulus power(double theta);
  static Modulus log() { return Modulus(Kind::kLog, 0.0); }
  /// Parses "constant", "log", or "power:<theta>".
  static Modulus parse(const std::string& text);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  double operator()(double s) const;
  std::string name() const;

 private:
  Modulus(Kind kind, double theta) : kind_(kind), theta_(theta) {}
  Kind kind_;
  double theta_;
};

}  // namespace onsager
