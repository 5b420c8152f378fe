#include "pvw/elliptic_solver.hpp"

#include <cmath>
#include <string>

#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

namespace pvw {

bool is_resonant(double lambda, double lambda_q) {
  return std::abs(lambda - lambda_q) < 1e-8 * std::max(1.0, lambda_q);
}

std::optional<int> find_resonance(const ModelParams& params, double lambda, int max_index) {
  if (lambda <= 0.0) return std::nullopt;
  const std::vector<double> lams = eigenvalues(params, max_index);
  for (int q = 1; q <= max_index; ++q) {
    if (is_resonant(lambda, lams[q - 1])) return q;
    if (lams[q - 1] > 2.0 * lambda + 1.0) break;
  }
  return std::nullopt;
}

PowerSeries recurrence_solution(double lambda, const PowerSeries& f, double a0, double N) {
  if (f.half()) throw ValidationError("right side must be an integer-power series");
  const int cap = f.cap() + 1;
  const double h = N / 2.0;
  std::vector<double> a(static_cast<std::size_t>(cap) + 1, 0.0);
  a[0] = a0;
  for (int k = 0; k < cap; ++k) a[k + 1] = -(lambda * a[k] + f[k]) / ((k + 1.0) * (k + h));
  return PowerSeries(a, cap);
}

EllipticSolution solve_series(const EllipticProblem& prob, const ModelParams& params, double a0) {
  if (prob.resonant_index) {
    throw ValidationError("problem is resonant with mode " + std::to_string(*prob.resonant_index) +
                          "; use the resonant solver");
  }
  const double N = params.N;
  const double phi_at_one = eval_phi(Order(params.nu()), prob.lambda);
  if (std::abs(phi_at_one) < 1e-8) {
    throw NearResonanceError("lambda = " + std::to_string(prob.lambda) +
                                 " is within resonance tolerance of the spectrum; use the resonant solver",
                             phi_at_one);
  }
  EllipticSolution sol;
  const PowerSeries particular = recurrence_solution(prob.lambda, prob.f, a0, N);
  const PowerSeries hom(phi_coefficients(params.nu(), prob.lambda, particular.cap()), particular.cap());
  sol.homogeneous_const = -particular.at_one() / hom.at_one();
  sol.y = particular + hom * sol.homogeneous_const;
  return sol;
}

EllipticSolution solve_green_zero(const PowerSeries& f, double N) {
  if (f.half()) throw ValidationError("right side must be an integer-power series");
  const double h = N / 2.0;
  const double c = 2.0 / (N - 2.0);
  PowerSeries y(f.cap() + 1);
  // int_z^1 f + z^{1-h} int_0^z f w^{h-1} - int_0^1 f w^{h-1}, termwise.
  double constant = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    const double a = f[k];
    if (a == 0.0) continue;
    const double from_z_to_one = 1.0 / (k + 1.0);
    const double weighted_total = 1.0 / (k + h);
    constant += a * (from_z_to_one - weighted_total);
    y.set(k + 1, y[k + 1] + c * a * (-1.0 / (k + 1.0) + 1.0 / (k + h)));
  }
  y.set(0, c * constant);
  y.set(0, y[0] - y.at_one());
  return {y, 0.0, 0.0};
}

EllipticSolution solve_dirichlet_zero(const PowerSeries& f, double N) {
  if (f.half()) throw ValidationError("right side must be an integer-power series");
  const double h = N / 2.0;
  const double c = 2.0 / (N - 2.0);
  PowerSeries inner(f.cap() + 1);  // int_0^z (1 - (w/z)^{h-1}) f dw
  double total = 0.0;              // int_0^1 (1 - w^{h-1}) f dw
  for (int k = 0; k < f.size(); ++k) {
    const double kernel_moment = 1.0 / (k + 1.0) - 1.0 / (k + h);
    inner.set(k + 1, f[k] * kernel_moment);
    total += f[k] * kernel_moment;
  }
  PowerSeries y = inner * (-c);
  y += PowerSeries::constant(c * total, y.cap());
  y.set(0, y[0] - y.at_one());
  return {y, 0.0, 0.0};
}

namespace {

const QuadratureRule& legendre_rule() {
  static const QuadratureRule rule = make_jacobi_rule(0.0, 48);
  return rule;
}

// int_0^1 g(u) u^{h-1} du and int_0^1 g(u) du for smooth g.
double weighted_unit_integral(const std::function<double(double)>& g, const QuadratureRule& rule) {
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return s;
}

}  // namespace

std::vector<double> solve_green_zero(const std::function<double(double)>& f, double N,
                                     const std::vector<double>& points) {
  const double h = N / 2.0;
  const double c = 2.0 / (N - 2.0);
  const QuadratureRule jac = make_jacobi_rule(h - 1.0, 48);
  const QuadratureRule& leg = legendre_rule();
  const double total = weighted_unit_integral(f, jac);
  std::vector<double> out;
  out.reserve(points.size());
  for (double z : points) {
    const double upper = (1.0 - z) * weighted_unit_integral([&](double u) { return f(z + (1.0 - z) * u); }, leg);
    // z^{1-h} int_0^z f w^{h-1} dw = z int_0^1 f(z u) u^{h-1} du
    const double lower = z * weighted_unit_integral([&](double u) { return f(z * u); }, jac);
    out.push_back(c * (upper + lower - total));
  }
  return out;
}

std::vector<double> solve_dirichlet_zero(const std::function<double(double)>& f, double N,
                                         const std::vector<double>& points) {
  const double h = N / 2.0;
  const double c = 2.0 / (N - 2.0);
  const QuadratureRule& leg = legendre_rule();
  const QuadratureRule jac = make_jacobi_rule(h - 1.0, 48);
  // int_0^1 (1 - u^{h-1}) g(u) du, split so each piece is integrated exactly
  // for polynomial g.
  auto kernel_integral = [&](const std::function<double(double)>& g) {
    return weighted_unit_integral(g, leg) - weighted_unit_integral(g, jac);
  };
  const double total = kernel_integral(f);
  std::vector<double> out;
  out.reserve(points.size());
  for (double z : points) {
    const double inner = z * kernel_integral([&](double u) { return f(z * u); });
    out.push_back(-c * inner + c * total);
  }
  return out;
}

EllipticSolution solve_resonant(const EllipticProblem& prob, const ModelParams& params, const EigenPair& phi_q,
                                const QuadratureRule& rule) {
  if (!phi_q.has_series) throw ValidationError("resonant solve needs the eigenfunction as a series");
  if (!is_resonant(prob.lambda, phi_q.lambda)) {
    throw ValidationError("lambda is not resonant with the supplied eigenfunction");
  }
  EllipticSolution sol;
  const PowerSeries phi = phi_q.phi.with_cap(std::max(phi_q.phi.cap(), prob.f.cap()));
  sol.projection_removed = inner_product(prob.f, phi, rule);
  const PowerSeries projected = prob.f - phi * sol.projection_removed;
  const PowerSeries raw = recurrence_solution(phi_q.lambda, projected, 0.0, params.N);
  const double gauge = inner_product(raw, phi, rule);
  sol.y = raw - phi.with_cap(raw.cap()) * gauge;
  sol.homogeneous_const = -gauge * phi_q.norm_const;
  return sol;
}

PowerSeries elliptic_defect(const PowerSeries& y, double lambda, const PowerSeries& f, double N) {
  return y * (-lambda) - y.laplace(N / 2.0) - f;
}

double elliptic_residual(const PowerSeries& y, double lambda, const PowerSeries& f, double N,
                         const QuadratureRule& rule) {
  return norm(elliptic_defect(y, lambda, f, N), rule);
}

}  // namespace pvw
