#pragma once

namespace pvw {

/// Physical and spectral configuration shared by all modules.
///
/// The effective dimension N fixes both the Bessel order nu = N/2 - 1 and the
/// adiabatic exponent gamma = N/(N-2); neither is stored independently.
struct ModelParams {
  double N = 4.0;
  int n0 = 1;             // mode index of the fundamental oscillation
  double theta0 = 0.0;    // phase of the fundamental oscillation
  int order = 3;          // perturbation order K
  double epsilon = 1e-2;  // amplitude
  int working_degree = 40;
  int quadrature_points = 128;

  double nu() const { return N / 2.0 - 1.0; }
  double gamma() const { return N / (N - 2.0); }
  double half_dim() const { return N / 2.0; }

  // Throws ValidationError unless N >= 4 and the integer fields are sane.
  // Library routines accept any N > 2 so that the nu = 1/2 control cases
  // (N = 3) remain expressible in tests.
  void validate() const;
};

}  // namespace pvw
