#pragma once

#include <vector>

#include "pvw/params.hpp"

namespace pvw {

/// Bessel order nu. The model uses nu = N/2 - 1 >= 1; orders down to 1/2 are
/// admitted so the sine-type control case J_{1/2} stays available.
class Order {
 public:
  explicit Order(double nu);
  double value() const { return nu_; }
  Order shifted(double by) const { return Order(nu_ + by); }

 private:
  double nu_;
};

/// Gamma function for x > 0 (Lanczos approximation, g = 7, nine terms).
double gamma_fn(double x);

/// Phi_nu(X) = sum_k (-X)^k / (k! Gamma(nu + k + 1)) by direct summation.
/// Stops once |term| < 1e-16 |sum| and k > |X|; throws NumericalError after
/// 500 terms. Accurate for X <= 0 and modest X > 0 only.
double phi_series(Order nu, double X);

/// Phi_nu(X) for any finite X. Positive X beyond 1 is evaluated through
/// J_nu(2 sqrt X) / X^{nu/2}, where the series would cancel catastrophically.
double eval_phi(Order nu, double X);

/// Phi_nu(X) together with Phi_{nu+1}(X) = -Phi_nu'(X).
struct PhiPair {
  double phi;
  double phi_next;
};
PhiPair eval_phi_pair(Order nu, double X);

/// J_nu(r) and J_{nu+1}(r) from one backward recurrence.
struct BesselPair {
  double j;
  double j_next;
};
BesselPair bessel_j_pair(Order nu, double r);

/// J_nu(r) = (r/2)^nu Phi_nu(r^2/4); throws std::domain_error for r <= 0.
double eval_bessel_j(Order nu, double r);

/// J_nu'(r) = (nu/r) J_nu(r) - J_{nu+1}(r).
double eval_bessel_j_derivative(Order nu, double r);

/// First `count` positive zeros of J_nu in increasing order, each with
/// absolute error below 1e-12.
std::vector<double> bessel_zeros(Order nu, int count);
double bessel_zero(Order nu, int n);

/// The integer offset n0 in j_{nu,n} ~ (n0 + n + nu/2 + 3/4) pi, fitted to
/// the first computed zero.
int asymptotic_offset(Order nu);
double asymptotic_zero(Order nu, int n);

/// lambda_n = (j_{nu,n} / 2)^2.
double eigenvalue(const ModelParams& params, int n);
std::vector<double> eigenvalues(const ModelParams& params, int count);

namespace testing {
// Multiplies every gamma_fn result by `factor`; 1.0 restores normal operation.
void set_gamma_corruption(double factor);
double gamma_corruption();
}  // namespace testing

}  // namespace pvw
