#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pvw/params.hpp"
#include "pvw/series.hpp"

namespace pvw {

/// Gauss rule on [0,1] for the weight z^beta.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness_degree = 0;
  double weight_exponent = 0.0;
  int size() const { return static_cast<int>(nodes.size()); }
};

/// Values at the nodes of a specific rule.
using GridFunction = std::vector<double>;

QuadratureRule make_jacobi_rule(double weight_exponent, int point_count);

/// Rule for the measure z^{N/2-1} dz of the state space.
QuadratureRule make_rule(const ModelParams& params, int point_count);

GridFunction sample(const PowerSeries& f, const QuadratureRule& rule);
GridFunction sample(const std::function<double(double)>& f, const QuadratureRule& rule);

double inner_product(const GridFunction& f, const GridFunction& g, const QuadratureRule& rule);
double inner_product(const PowerSeries& f, const PowerSeries& g, const QuadratureRule& rule);
double norm(const GridFunction& f, const QuadratureRule& rule);
double norm(const PowerSeries& f, const QuadratureRule& rule);

/// (y)_{2m} = ||lap^m y||, (y)_{2m+1} = ||sqrt(z) d/dz lap^m y||.
double seminorm(const PowerSeries& y, int ell, double N, const QuadratureRule& rule);

/// Same seminorms for y = sum c_n phi_n: (y)_l^2 = sum c_n^2 lambda_n^l.
double spectral_seminorm(const std::vector<double>& coeffs, const std::vector<double>& lambdas, int ell);

/// ((y))_s = max_{j <= s} ||(-lap)^j y|| for a spectral expansion.
double spectral_sobolev_norm(const std::vector<double>& coeffs, const std::vector<double>& lambdas, int s);

struct GradedNormReport {
  int n = 0;
  double value_sup = 0.0;
  double value_l2 = 0.0;
};

/// (-d^2/dt^2)^j (-lap)^k y at time t, as a power series in z.
using GradedField = std::function<PowerSeries(int j, int k, double t)>;

/// Sup grading max_{j+k<=n} ||(-d_t^2)^j (-lap)^k y||_inf over [0,T] x [0,1] and
/// its L^2 companion (sum_{j+k<=n} int_0^T ||.||^2 dt)^{1/2}.
GradedNormReport graded_norms(const GradedField& y, int n, double T, const QuadratureRule& rule,
                              int time_samples = 65);

}  // namespace pvw
