#pragma once

#include <stdexcept>
#include <string>

namespace pvw {

// Configuration or precondition problems (CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdowns: bracketing failures, radius violations, blow-up
// (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the non-resonant elliptic solve when Phi(lambda) is too close to zero.
class NearResonanceError : public NumericalError {
 public:
  NearResonanceError(const std::string& what, double phi_at_one)
      : NumericalError(what), phi_at_one_(phi_at_one) {}
  double phi_at_one() const noexcept { return phi_at_one_; }

 private:
  double phi_at_one_;
};

}  // namespace pvw
