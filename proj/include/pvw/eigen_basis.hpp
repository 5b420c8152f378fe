#pragma once

#include <vector>

#include "pvw/params.hpp"
#include "pvw/series.hpp"
#include "pvw/weighted_space.hpp"

namespace pvw {

/// Normalized Dirichlet eigenfunction phi_n = Phi_nu(lambda_n z) / norm_const
/// of -lap on [0,1]. Immutable once built; safe to share between threads.
struct EigenPair {
  int index = 0;
  double lambda = 0.0;
  double norm_const = 0.0;
  double nu = 0.0;
  bool has_series = false;
  PowerSeries phi;  // empty unless has_series

  /// Pointwise values through the Bessel path, valid for every index.
  double value(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;
  GridFunction values(const QuadratureRule& rule) const;
};

/// Coefficients (-lambda)^k / (k! Gamma(nu+k+1)) for k <= degree.
std::vector<double> phi_coefficients(double nu, double lambda, int degree);

/// Sum_{k > degree} |a_k| bound for the series above.
double phi_tail_bound(double nu, double lambda, int degree);

/// Smallest degree whose tail is below 1e-14 |a_0|, or -1 when the series
/// cannot be summed accurately in double precision.
int sufficient_degree(double nu, double lambda);

/// ||Phi_nu(lambda .)|| by Gauss-Jacobi quadrature.
double eigen_norm(const ModelParams& params, double lambda, int index);

/// Throws NumericalError when `degree` leaves a tail above 1e-14 |a_0|.
EigenPair eigenfunction(const ModelParams& params, int n, int degree);

/// First `count` eigenpairs; series are attached wherever summable.
std::vector<EigenPair> eigen_basis(const ModelParams& params, int count);

struct Expansion {
  std::vector<double> coeffs;
  double reconstruction_error = 0.0;
};

/// c_n = (y|phi_n) and ||y - sum c_n phi_n||. Throws if the basis Gram matrix
/// deviates from the identity by more than 1e-6 on this rule.
Expansion expand(const GridFunction& y, const std::vector<EigenPair>& basis, const QuadratureRule& rule);
Expansion expand(const PowerSeries& y, const std::vector<EigenPair>& basis, const QuadratureRule& rule);

GridFunction synthesize(const std::vector<double>& coeffs, const std::vector<EigenPair>& basis,
                        const QuadratureRule& rule);

}  // namespace pvw
