#include "pvw/identities.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "pvw/series.hpp"

namespace pvw {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
Series<T> random_poly(std::mt19937_64& rng, int degree, int cap) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> deg(1, degree);
  const int d = deg(rng);
  std::vector<T> c(static_cast<std::size_t>(d) + 1);
  for (auto& x : c) x = T(coeff(rng));
  return Series<T>(c, cap);
}

template <class T>
Series<T> lap_pow(Series<T> y, const T& h, int m) {
  for (int i = 0; i < m; ++i) y = y.laplace(h);
  return y;
}

template <class T>
Series<T> dot_pow(Series<T> y, int k) {
  for (int i = 0; i < k; ++i) y = y.dot_d();
  return y;
}

template <class T>
Series<T> d_pow(Series<T> y, int k) {
  for (int i = 0; i < k; ++i) y = y.d();
  return y;
}

template <class T>
double to_double(const T& x) {
  return static_cast<double>(x);
}

// Each identity returns (lhs, rhs) for inputs (N, Q, P).
template <class T>
using Identity = std::function<std::pair<Series<T>, Series<T>>(const T& N, const Series<T>& Q, const Series<T>& P)>;

template <class T>
std::vector<std::pair<std::string, Identity<T>>> identity_table() {
  std::vector<std::pair<std::string, Identity<T>>> t;
  for (int m = 0; m <= 3; ++m) {
    t.emplace_back("derivative_formula_m" + std::to_string(m), [m](const T& N, const Series<T>&, const Series<T>& y) {
      const T h = N / T(2);
      const Series<T> lhs = lap_pow(y.d(), h, m);
      const Series<T> rhs = lap_pow(y, h, m + 1).hardy(h + T(m));
      return std::make_pair(lhs, rhs);
    });
  }
  for (int k = 0; k <= 4; ++k) {
    t.emplace_back("half_derivative_formula_k" + std::to_string(k), [k](const T& N, const Series<T>&, const Series<T>& y) {
      const T h = N / T(2);
      const Series<T> lhs = dot_pow(y.d(), k);
      const Series<T> rhs = dot_pow(y.laplace(h), k).hardy((N + T(k)) / T(2));
      return std::make_pair(lhs, rhs);
    });
  }
  t.emplace_back("euler_square", [](const T& N, const Series<T>&, const Series<T>& y) {
    const T h = N / T(2);
    return std::make_pair(y.check_d().check_d(), y.laplace(h).times_z() - y.check_d() * (h - T(1)));
  });
  t.emplace_back("laplace_euler_commutator", [](const T& N, const Series<T>&, const Series<T>& y) {
    const T h = N / T(2);
    return std::make_pair(y.check_d().laplace(h) - y.laplace(h).check_d(), y.laplace(h));
  });
  t.emplace_back("laplace_of_q_euler_p", [](const T& N, const Series<T>& Q, const Series<T>& P) {
    const T h = N / T(2);
    const Series<T> lhs = (Q * P.check_d()).laplace(h);
    const Series<T> rhs = Q * P.laplace(h).check_d() + (Q + Q.check_d() * T(2)) * P.laplace(h) +
                          (Q.laplace(h) - Q.d() * (N - T(2))) * P.check_d();
    return std::make_pair(lhs, rhs);
  });
  t.emplace_back("laplace_product_rule", [](const T& N, const Series<T>& Q, const Series<T>& P) {
    const T h = N / T(2);
    const Series<T> lhs = (Q * P).laplace(h);
    const Series<T> rhs = Q * P.laplace(h) + Q.d() * P.check_d() * T(2) + Q.laplace(h) * P;
    return std::make_pair(lhs, rhs);
  });
  t.emplace_back("half_derivative_square", [](const T& N, const Series<T>&, const Series<T>& y) {
    return std::make_pair(y.dot_d().dot_d(), y.laplace(N / T(2)) - y.d() * ((N - T(1)) / T(2)));
  });
  t.emplace_back("derivative_laplace_commutator", [](const T& N, const Series<T>&, const Series<T>& y) {
    const T h = N / T(2);
    return std::make_pair(y.laplace(h).d() - y.d().laplace(h), y.d().d());
  });
  t.emplace_back("derivative_half_square_commutator", [](const T&, const Series<T>&, const Series<T>& y) {
    return std::make_pair(y.dot_d().dot_d().d() - y.d().dot_d().dot_d(), y.d().d());
  });
  return t;
}

// Ratio ||lap^m D^k z^{m+k}|| / ||lap^{m+k} z^{m+k}|| against 1 / prod_j (N/2+m+j).
template <class T>
T corollary_defect(const T& N, int m, int k) {
  const T h = N / T(2);
  const int cap = m + k + 2;
  const Series<T> mono = Series<T>::monomial(m + k, T(1), cap);
  const T num = lap_pow(d_pow(mono, k), h, m)[0];
  const T den = lap_pow(mono, h, m + k)[0];
  T expected(1);
  for (int j = 0; j < k; ++j) expected /= (h + T(m + j));
  T d = num / den - expected;
  return d < T(0) ? T(-d) : d;
}

}  // namespace

double IdentityReport::max_exact_defect() const {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.exact_defect);
  return w;
}

double IdentityReport::max_float_defect() const {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.float_defect);
  return w;
}

bool IdentityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

double derivative_formula_value(double N, int m, bool alternative) {
  const double h = N / 2.0;
  const PowerSeries y = PowerSeries::monomial(2, 1.0, 8);
  const PowerSeries top = lap_pow(y, h, m + 1);
  return top.hardy(alternative ? h + m + 1.0 : h + m)(0.5);
}

IdentityReport verify_identities(int degree, std::uint64_t seed) {
  if (degree < 1) throw std::invalid_argument("identity degree must be >= 1");
  IdentityReport report;
  const int samples = 8;
  const int cap = 2 * degree + 8;
  const std::vector<std::pair<Rational, double>> dims = {
      {Rational(4), 4.0}, {Rational(9, 2), 4.5}, {Rational(5), 5.0}, {Rational(6), 6.0}};

  const auto exact_table = identity_table<Rational>();
  const auto float_table = identity_table<double>();
  for (std::size_t i = 0; i < exact_table.size(); ++i) {
    IdentityCheck check;
    check.name = exact_table[i].first;
    std::mt19937_64 rng(seed + i);
    for (const auto& [Nq, Nd] : dims) {
      for (int s = 0; s < samples; ++s) {
        const auto Qq = random_poly<Rational>(rng, std::max(1, degree / 2), cap);
        const auto Pq = random_poly<Rational>(rng, check.name.find("_of_q") != std::string::npos ||
                                                           check.name.find("product") != std::string::npos
                                                       ? std::max(1, degree / 2)
                                                       : degree,
                                              cap);
        const auto [lq, rq] = exact_table[i].second(Nq, Qq, Pq);
        check.exact_defect = std::max(check.exact_defect, to_double(max_coeff_defect(lq, rq)));

        std::vector<double> qc, pc;
        for (const auto& x : Qq.coeffs()) qc.push_back(static_cast<double>(x));
        for (const auto& x : Pq.coeffs()) pc.push_back(static_cast<double>(x));
        const auto [lf, rf] = float_table[i].second(Nd, PowerSeries(qc, cap), PowerSeries(pc, cap));
        const double scale = std::max({1.0, max_abs_coeff(lf), max_abs_coeff(rf)});
        check.float_defect = std::max(check.float_defect, max_coeff_defect(lf, rf) / scale);
      }
    }
    check.passed = check.exact_defect == 0.0 && check.float_defect <= 1e-12;
    report.checks.push_back(check);
  }

  IdentityCheck corollary;
  corollary.name = "derivative_ratio_constant";
  for (const auto& [Nq, Nd] : dims) {
    for (int m = 0; m <= 4; ++m) {
      for (int k = 1; k <= 4; ++k) {
        corollary.exact_defect = std::max(corollary.exact_defect, to_double(corollary_defect<Rational>(Nq, m, k)));
        corollary.float_defect = std::max(corollary.float_defect, corollary_defect<double>(Nd, m, k));
      }
    }
  }
  corollary.passed = corollary.exact_defect == 0.0 && corollary.float_defect <= 1e-12;
  report.checks.push_back(corollary);

  report.alternative_value = derivative_formula_value(4.0, 1, true);
  report.alternative_defect = std::abs(report.alternative_value - 4.0);
  return report;
}

}  // namespace pvw
