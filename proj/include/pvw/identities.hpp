#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pvw {

struct IdentityCheck {
  std::string name;
  double exact_defect = 0.0;  // rational arithmetic; must be exactly zero
  double float_defect = 0.0;  // double arithmetic, relative to operand scale
  bool passed = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  // The alternative exponent pairing for the derivative formula, evaluated on
  // y = z^2, N = 4, m = 1: value of the right side and its gap to the true 4.
  double alternative_value = 0.0;
  double alternative_defect = 0.0;
  double max_exact_defect() const;
  double max_float_defect() const;
  bool all_passed() const;
};

/// Operator identities for z d^2/dz^2 + (N/2) d/dz and its companions, checked
/// on seeded random polynomials of degree <= `degree` for N in {4, 9/2, 5, 6}.
IdentityReport verify_identities(int degree, std::uint64_t seed = 20240611ULL);

/// z^{-(N/2+m)} int_0^z (lap^{m+1} y) w^{N/2+m-1} dw on y = z^2 with the
/// printed pairing z^{-(N/2+m+1)} and weight w^{N/2+m} when `alternative`.
double derivative_formula_value(double N, int m, bool alternative);

}  // namespace pvw
