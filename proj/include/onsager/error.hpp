#pragma once

#include <stdexcept>
#include <string>

namespace onsager {

/// Raised when inputs violate a documented precondition (bad dims, empty
/// band, epsilon out of range, malformed files). The CLI maps it to exit 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an exact identity that the numerics guarantee fails to hold
/// (decomposition residual, boundary zero, divergence preservation).
/// The CLI maps it to exit 3.
class IdentityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time stepping exceeded the CFL limit.
class CflError : public std::runtime_error {
 public:
  CflError(long step, double cfl)
      : std::runtime_error("CFL violation at step " + std::to_string(step) +
                           " (cfl=" + std::to_string(cfl) + ")"),
        step_(step),
        cfl_(cfl) {}
  long step() const { return step_; }
  double cfl() const { return cfl_; }

 private:
  long step_;
  double cfl_;
};

}  // namespace onsager
