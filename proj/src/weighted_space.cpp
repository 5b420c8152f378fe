#include "pvw/weighted_space.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "pvw/errors.hpp"

namespace pvw {

namespace {

// Three-term recurrence of the Jacobi weight (1-x)^0 (1+x)^beta mapped to
// [0,1]: diagonal a'_k and off-diagonal b'_{k+1}.
struct MappedRecurrence {
  std::vector<double> diag;
  std::vector<double> off;  // off[k] couples degrees k and k+1
};

MappedRecurrence jacobi_recurrence(double beta, int n) {
  const double alpha = 0.0;
  MappedRecurrence r;
  r.diag.resize(static_cast<std::size_t>(n));
  r.off.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    const double num = beta * beta - alpha * alpha;
    const double a = num == 0.0 ? 0.0 : num / (s * (s + 2.0));
    r.diag[k] = 0.5 * (a + 1.0);
    const double kk = k + 1.0;
    const double s1 = 2.0 * kk + alpha + beta;
    const double b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + alpha + beta) /
                      ((s1 - 1.0) * s1 * s1 * (s1 + 1.0));
    r.off[k] = 0.5 * std::sqrt(b2);
  }
  return r;
}

}  // namespace

QuadratureRule make_jacobi_rule(double beta, int n) {
  if (n < 2) throw ValidationError("quadrature needs at least 2 points");
  if (!(beta > -1.0)) throw ValidationError("weight exponent must exceed -1");
  const MappedRecurrence rec = jacobi_recurrence(beta, n);
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = rec.diag[k];
  for (int k = 0; k + 1 < n; ++k) sub[k] = rec.off[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("quadrature node computation failed");

  const double mu0 = 1.0 / (beta + 1.0);
  // Orthonormal polynomial values p_0..p_n at x, plus p_n'.
  auto evaluate = [&](double x, double& pn, double& dpn, double& sumsq) {
    double p_prev = 0.0, p = 1.0 / std::sqrt(mu0);
    double d_prev = 0.0, d = 0.0;
    sumsq = p * p;
    for (int k = 0; k < n; ++k) {
      const double b_prev = k == 0 ? 0.0 : rec.off[k - 1];
      const double p_next = ((x - rec.diag[k]) * p - b_prev * p_prev) / rec.off[k];
      const double d_next = (p + (x - rec.diag[k]) * d - b_prev * d_prev) / rec.off[k];
      p_prev = p;
      p = p_next;
      d_prev = d;
      d = d_next;
      if (k + 1 < n) sumsq += p * p;
    }
    pn = p;
    dpn = d;
  };

  QuadratureRule rule;
  rule.weight_exponent = beta;
  rule.exactness_degree = 2 * n - 1;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    double pn, dpn, sumsq;
    for (int it = 0; it < 3; ++it) {
      evaluate(x, pn, dpn, sumsq);
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      x -= step;
      if (std::abs(step) < 1e-17) break;
    }
    evaluate(x, pn, dpn, sumsq);
    if (!(x > 0.0 && x < 1.0)) throw NumericalError("quadrature node left (0,1)");
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sumsq;
  }
  return rule;
}

QuadratureRule make_rule(const ModelParams& params, int point_count) {
  return make_jacobi_rule(params.nu(), point_count);
}

GridFunction sample(const PowerSeries& f, const QuadratureRule& rule) {
  GridFunction out(rule.nodes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(rule.nodes[i]);
  return out;
}

GridFunction sample(const std::function<double(double)>& f, const QuadratureRule& rule) {
  GridFunction out(rule.nodes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(rule.nodes[i]);
  return out;
}

double inner_product(const GridFunction& f, const GridFunction& g, const QuadratureRule& rule) {
  if (f.size() != rule.nodes.size() || g.size() != rule.nodes.size()) {
    throw ValidationError("grid function length " + std::to_string(f.size()) + "/" + std::to_string(g.size()) +
                          " does not match rule size " + std::to_string(rule.nodes.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += rule.weights[i] * f[i] * g[i];
  return s;
}

double inner_product(const PowerSeries& f, const PowerSeries& g, const QuadratureRule& rule) {
  return inner_product(sample(f, rule), sample(g, rule), rule);
}

double norm(const GridFunction& f, const QuadratureRule& rule) { return std::sqrt(inner_product(f, f, rule)); }
double norm(const PowerSeries& f, const QuadratureRule& rule) { return norm(sample(f, rule), rule); }

double seminorm(const PowerSeries& y, int ell, double N, const QuadratureRule& rule) {
  if (ell < 0) throw ValidationError("seminorm order must be nonnegative");
  PowerSeries u = y;
  for (int i = 0; i < ell / 2; ++i) u = u.laplace(N / 2.0);
  if (ell % 2 == 1) u = u.dot_d();
  return norm(u, rule);
}

double spectral_seminorm(const std::vector<double>& c, const std::vector<double>& lambdas, int ell) {
  if (c.size() > lambdas.size()) throw ValidationError("more coefficients than eigenvalues");
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * c[i] * std::pow(lambdas[i], ell);
  return std::sqrt(s);
}

double spectral_sobolev_norm(const std::vector<double>& c, const std::vector<double>& lambdas, int s) {
  double best = 0.0;
  for (int j = 0; j <= s; ++j) best = std::max(best, spectral_seminorm(c, lambdas, 2 * j));
  return best;
}

GradedNormReport graded_norms(const GradedField& y, int n, double T, const QuadratureRule& rule, int time_samples) {
  if (n < 0) throw ValidationError("graded norm order must be nonnegative");
  if (!(T > 0.0)) throw ValidationError("graded norm horizon must be positive");
  if (time_samples < 3 || time_samples % 2 == 0) throw ValidationError("time_samples must be odd and >= 3");
  std::vector<double> zs = rule.nodes;
  for (int i = 0; i <= 64; ++i) zs.push_back(i / 64.0);

  GradedNormReport rep;
  rep.n = n;
  double l2 = 0.0;
  const double h = T / (time_samples - 1);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; j + k <= n; ++k) {
      double integral = 0.0;
      for (int s = 0; s < time_samples; ++s) {
        const double t = s * h;
        const PowerSeries f = y(j, k, t);
        for (double z : zs) rep.value_sup = std::max(rep.value_sup, std::abs(f(z)));
        const double nf = norm(f, rule);
        const double simpson = (s == 0 || s == time_samples - 1) ? 1.0 : (s % 2 ? 4.0 : 2.0);
        integral += simpson * nf * nf;
      }
      l2 += integral * h / 3.0;
    }
  }
  rep.value_l2 = std::sqrt(l2);
  return rep;
}

}  // namespace pvw
