#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "doctest.h"
#include "pvw/errors.hpp"
#include "pvw/identities.hpp"
#include "pvw/series.hpp"
#include "pvw/special_functions.hpp"

using namespace pvw;
using Rational = boost::multiprecision::cpp_rational;

TEST_CASE("laplace coefficient rule") {
  const PowerSeries z2 = PowerSeries::monomial(2, 1.0, 10);
  const PowerSeries out = z2.laplace(2.0);
  CHECK(out[1] == 6.0);
  CHECK(out.degree() == 1);
  CHECK(PowerSeries::constant(3.0, 10).laplace(2.0).degree() == -1);
}

TEST_CASE("laplace reproduces the eigenrelation of Phi(lambda z)") {
  ModelParams p;
  const double lam = eigenvalue(p, 1);
  const int cap = 40;
  std::vector<double> c(cap + 1);
  double term = 1.0 / gamma_fn(2.0);
  for (int k = 0; k <= cap; ++k) {
    c[k] = term;
    term *= -lam / ((k + 1) * (k + 2.0));
  }
  const PowerSeries phi(c, cap);
  const PowerSeries lap = phi.laplace(2.0);
  for (int k = 0; k < cap; ++k) CHECK(std::abs(lap[k] + lam * phi[k]) <= 1e-12 * std::max(1.0, std::abs(lam * phi[k])));
}

TEST_CASE("euler and half derivatives") {
  const PowerSeries z2 = PowerSeries::monomial(2, 1.0, 10);
  CHECK(z2.check_d()[2] == 2.0);
  const PowerSeries half = z2.dot_d();  // 2 z^{3/2}
  CHECK(half.half());
  CHECK(half[1] == 2.0);
  CHECK(half(0.25) == doctest::Approx(2.0 * 0.125));
  const PowerSeries back = half.dot_d();  // 3 z
  CHECK_FALSE(back.half());
  CHECK(back[1] == 3.0);
  const PowerSeries comm = z2.check_d().laplace(2.0) - z2.laplace(2.0).check_d();
  CHECK(max_coeff_defect(comm, z2.laplace(2.0)) == 0.0);
  CHECK(comm[1] == 6.0);
  CHECK_THROWS_AS(half.d(), std::invalid_argument);
}

TEST_CASE("half-power products carry into the integer channel") {
  const PowerSeries a = PowerSeries::monomial(1, 1.0, 10).dot_d();  // z^{1/2}
  const PowerSeries sq = a * a;
  CHECK_FALSE(sq.half());
  CHECK(sq[1] == 1.0);
}

TEST_CASE("nonlinearity coefficients") {
  const auto n4 = build_nonlinearity(4.0, 6);
  CHECK(n4.gI[1] == doctest::Approx(-3.0));
  CHECK(n4.gII[2] == doctest::Approx(-3.0));
  CHECK(n4.gI[0] == 0.0);
  CHECK(n4.gII[1] == 0.0);
  const auto n6 = build_nonlinearity(6.0, 6);
  CHECK(n6.gI[1] == doctest::Approx(-2.5));
  for (double N : {4.0, 5.0, 6.0, 9.0}) {
    const auto s = build_nonlinearity(N, 4);
    CHECK(s.gI[1] == doctest::Approx(-(2 * N - 2) / (N - 2)));
    CHECK(s.gII[2] == doctest::Approx(-N * (N - 1) / (2 * (N - 2))));
  }
  // Exact rational path: N = 6 gives gamma = 3/2.
  const auto q = nonlinearity_coefficients<Rational>(Rational(6), 4);
  CHECK(q.gI[1] == Rational(-5, 2));
  CHECK(q.gII[2] == Rational(-15, 4));
  CHECK_THROWS_AS(build_nonlinearity(4.0, 1), std::invalid_argument);
}

TEST_CASE("closed forms agree with series and finite differences") {
  const double gamma = 2.0;
  const auto s = build_nonlinearity(4.0, 30);
  for (double v : {-0.3, -0.05, 0.0, 0.05, 0.1, 0.3}) {
    double gi = 0.0, gii = 0.0, vp = 1.0;
    for (int l = 0; l <= 30; ++l) {
      gi += s.gI[l] * vp;
      gii += s.gII[l] * vp;
      vp *= v;
    }
    CHECK(gas_GI(gamma, v) == doctest::Approx(gi).epsilon(1e-10));
    CHECK(gas_GII(gamma, 2.0, v) == doctest::Approx(gii).epsilon(1e-10));
  }
  const double h = 1e-5;
  const double fd = (gas_G(gamma, 0.1 + h) - gas_G(gamma, 0.1 - h)) / (2 * h);
  CHECK(std::abs(fd - (1.0 + gas_GI(gamma, 0.1))) < 1e-8);
  const double fd2 = (gas_DG(gamma, 0.1 + h) - gas_DG(gamma, 0.1 - h)) / (2 * h);
  CHECK(std::abs(fd2 - gas_D2G(gamma, 0.1)) < 1e-8);
  CHECK(gas_GI(gamma, 0.0) == 0.0);
  for (double v : {1e-2, 1e-3, 1e-4}) CHECK(gas_GII(gamma, 2.0, v) / (v * v) == doctest::Approx(-3.0).epsilon(3 * v));
  CHECK_THROWS_AS(gas_G(gamma, -1.0), NumericalError);
}

TEST_CASE("compose") {
  const auto s = build_nonlinearity(4.0, 20);
  const PowerSeries zero(20);
  CHECK(compose(s.gI, zero).degree() == -1);
  const PowerSeries v({0.0, 0.2}, 20);  // v = 0.2 z
  const PowerSeries gi = compose(s.gI, v);
  // G_I + 1 = (1+v)^{-gamma-1}: termwise binomial series in z.
  const auto b = binomial_row(-3.0, 12);
  for (int k = 1; k <= 12; ++k) CHECK(gi[k] == doctest::Approx(b[k] * std::pow(0.2, k)).epsilon(1e-13));
  for (double z : {0.1, 0.5, 1.0}) CHECK(gi(z) == doctest::Approx(gas_GI(2.0, 0.2 * z)).epsilon(1e-8));
  CHECK_THROWS_AS(compose(s.gI, PowerSeries({0.0, 1.5}, 20)), NumericalError);
}

TEST_CASE("identities hold exactly") {
  const IdentityReport r = verify_identities(30);
  for (const auto& c : r.checks) {
    INFO(c.name, " exact ", c.exact_defect, " float ", c.float_defect);
    CHECK(c.passed);
  }
  CHECK(r.max_exact_defect() == 0.0);
  CHECK(r.max_float_defect() <= 1e-12);
  CHECK(r.alternative_value == doctest::Approx(3.0));
  CHECK(r.alternative_defect == doctest::Approx(1.0));
}

TEST_CASE("documented derivative formula instances") {
  // m = 0, y = z^2, N = 4: both sides equal 2z.
  const PowerSeries y = PowerSeries::monomial(2, 1.0, 8);
  const PowerSeries rhs = y.laplace(2.0).hardy(2.0);
  CHECK(max_coeff_defect(rhs, y.d()) == 0.0);
  CHECK(derivative_formula_value(4.0, 1, false) == doctest::Approx(4.0));
  CHECK(derivative_formula_value(4.0, 1, true) == doctest::Approx(3.0));
  // Product rule on Q = z, P = z^2.
  const PowerSeries Q = PowerSeries::monomial(1, 1.0, 8);
  const PowerSeries lhs = (Q * y).laplace(2.0);
  const PowerSeries prod = Q * y.laplace(2.0) + Q.d() * y.check_d() * 2.0 + Q.laplace(2.0) * y;
  CHECK(max_coeff_defect(lhs, prod) == 0.0);
}
