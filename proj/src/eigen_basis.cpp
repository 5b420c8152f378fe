#include "pvw/eigen_basis.hpp"

#include <cmath>
#include <string>

#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

namespace pvw {

namespace {
constexpr double kTailTolerance = 1e-14;
// Beyond this peak-to-leading ratio the alternating sum loses too many digits.
constexpr double kCancellationLimit = 1e4;
}  // namespace

double EigenPair::value(double z) const { return eval_phi(Order(nu), lambda * z) / norm_const; }

double EigenPair::derivative(double z) const {
  return -lambda * eval_phi_pair(Order(nu), lambda * z).phi_next / norm_const;
}

double EigenPair::second_derivative(double z) const {
  return lambda * lambda * eval_phi(Order(nu + 2.0), lambda * z) / norm_const;
}

GridFunction EigenPair::values(const QuadratureRule& rule) const {
  GridFunction out(rule.nodes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(rule.nodes[i]);
  return out;
}

std::vector<double> phi_coefficients(double nu, double lambda, int degree) {
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  double term = 1.0 / gamma_fn(nu + 1.0);
  for (int k = 0; k <= degree; ++k) {
    c[k] = term;
    term *= -lambda / ((k + 1.0) * (nu + k + 1.0));
  }
  return c;
}

double phi_tail_bound(double nu, double lambda, int degree) {
  double term = 1.0 / gamma_fn(nu + 1.0);
  for (int k = 0; k <= degree; ++k) term *= lambda / ((k + 1.0) * (nu + k + 1.0));
  const double ratio = lambda / ((degree + 2.0) * (nu + degree + 2.0));
  if (ratio >= 1.0) return INFINITY;
  return term / (1.0 - ratio);
}

int sufficient_degree(double nu, double lambda) {
  const double a0 = 1.0 / gamma_fn(nu + 1.0);
  double term = a0, peak = a0;
  for (int k = 0; k < 2000; ++k) {
    peak = std::max(peak, term);
    if (peak > kCancellationLimit * a0) return -1;
    if (phi_tail_bound(nu, lambda, k) < kTailTolerance * a0) return k;
    term *= lambda / ((k + 1.0) * (nu + k + 1.0));
  }
  return -1;
}

double eigen_norm(const ModelParams& params, double lambda, int index) {
  const int points = std::max(params.quadrature_points, 2 * index + 64);
  const QuadratureRule rule = make_rule(params, points);
  const Order nu(params.nu());
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const double v = eval_phi(nu, lambda * rule.nodes[i]);
    s += rule.weights[i] * v * v;
  }
  return std::sqrt(s);
}

namespace {
EigenPair make_pair(const ModelParams& params, int n, double lambda, int degree) {
  EigenPair e;
  e.index = n;
  e.lambda = lambda;
  e.nu = params.nu();
  e.norm_const = eigen_norm(params, lambda, n);
  if (degree >= 0) {
    auto c = phi_coefficients(e.nu, lambda, degree);
    for (auto& x : c) x /= e.norm_const;
    e.phi = PowerSeries(c, degree);
    e.has_series = true;
  }
  return e;
}
}  // namespace

EigenPair eigenfunction(const ModelParams& params, int n, int degree) {
  if (n < 1) throw ValidationError("eigenfunction index must be >= 1");
  if (degree < 1) throw ValidationError("eigenfunction degree must be >= 1");
  const double lambda = eigenvalue(params, n);
  const double a0 = 1.0 / gamma_fn(params.nu() + 1.0);
  const double tail = phi_tail_bound(params.nu(), lambda, degree);
  if (!(tail < kTailTolerance * a0)) {
    throw NumericalError("degree " + std::to_string(degree) + " insufficient for eigenfunction " + std::to_string(n) +
                         " (tail bound " + std::to_string(tail) + ")");
  }
  return make_pair(params, n, lambda, degree);
}

std::vector<EigenPair> eigen_basis(const ModelParams& params, int count) {
  const std::vector<double> lambdas = eigenvalues(params, count);
  std::vector<EigenPair> out;
  out.reserve(lambdas.size());
  for (int n = 1; n <= count; ++n) {
    const double lambda = lambdas[static_cast<std::size_t>(n - 1)];
    int degree = sufficient_degree(params.nu(), lambda);
    if (degree >= 0) degree = std::max(degree, params.working_degree);
    out.push_back(make_pair(params, n, lambda, degree));
  }
  return out;
}

GridFunction synthesize(const std::vector<double>& coeffs, const std::vector<EigenPair>& basis,
                        const QuadratureRule& rule) {
  if (coeffs.size() > basis.size()) throw ValidationError("more coefficients than basis functions");
  GridFunction out(rule.nodes.size(), 0.0);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    const GridFunction phi = basis[n].values(rule);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[n] * phi[i];
  }
  return out;
}

Expansion expand(const GridFunction& y, const std::vector<EigenPair>& basis, const QuadratureRule& rule) {
  std::vector<GridFunction> phis;
  phis.reserve(basis.size());
  for (const auto& e : basis) phis.push_back(e.values(rule));
  double gram_dev = 0.0;
  for (std::size_t m = 0; m < phis.size(); ++m) {
    for (std::size_t n = m; n < phis.size(); ++n) {
      const double g = inner_product(phis[m], phis[n], rule);
      gram_dev = std::max(gram_dev, std::abs(g - (m == n ? 1.0 : 0.0)));
    }
  }
  if (gram_dev > 1e-6) {
    throw NumericalError("basis is not orthonormal on this rule (Gram deviation " + std::to_string(gram_dev) + ")");
  }
  Expansion ex;
  GridFunction residual = y;
  for (const auto& phi : phis) {
    const double c = inner_product(y, phi, rule);
    ex.coeffs.push_back(c);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= c * phi[i];
  }
  ex.reconstruction_error = norm(residual, rule);
  return ex;
}

Expansion expand(const PowerSeries& y, const std::vector<EigenPair>& basis, const QuadratureRule& rule) {
  return expand(sample(y, rule), basis, rule);
}

}  // namespace pvw
