#include <cmath>
#include <random>

#include "doctest.h"
#include "pvw/eigen_basis.hpp"
#include "pvw/elliptic_solver.hpp"
#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

using namespace pvw;

namespace {

ModelParams dim(double N) {
  ModelParams p;
  p.N = N;
  return p;
}

// Random polynomial with p(1) = 0.
PowerSeries manufactured(std::mt19937_64& rng, int degree, int cap) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  double sum = 0.0;
  for (int k = 1; k <= degree; ++k) {
    c[k] = u(rng);
    sum += c[k];
  }
  c[0] = -sum;
  return PowerSeries(c, cap);
}

}  // namespace

TEST_CASE("raw recurrence reproduces Gamma(2) Phi_1(z)") {
  const PowerSeries y = recurrence_solution(1.0, PowerSeries(20), 1.0, 4.0);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == doctest::Approx(-0.5));
  CHECK(y[2] == doctest::Approx(1.0 / 12.0));
  const auto phi = phi_coefficients(1.0, 1.0, 20);
  for (int k = 0; k <= 20; ++k) CHECK(y[k] == doctest::Approx(phi[k] * gamma_fn(2.0)).epsilon(1e-14));
  // With the boundary condition the homogeneous problem has only the zero solution.
  const EllipticSolution s = solve_series({1.0, PowerSeries(20), std::nullopt}, dim(4.0), 1.0);
  CHECK(max_abs_coeff(s.y) < 1e-15);
}

TEST_CASE("constant right side at lambda = 0") {
  const PowerSeries one = PowerSeries::constant(1.0, 20);
  const PowerSeries expected({0.5, -0.5}, 21);
  CHECK(max_coeff_defect(solve_series({0.0, one, std::nullopt}, dim(4.0)).y, expected) < 1e-15);
  CHECK(max_coeff_defect(solve_green_zero(one, 4.0).y, expected) < 1e-15);
  CHECK(max_coeff_defect(solve_dirichlet_zero(one, 4.0).y, expected) < 1e-15);
  const auto pts = std::vector<double>{0.0, 0.25, 0.5, 1.0};
  const auto g = solve_green_zero([](double) { return 1.0; }, 4.0, pts);
  const auto d = solve_dirichlet_zero([](double) { return 1.0; }, 4.0, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(g[i] == doctest::Approx(0.5 - 0.5 * pts[i]).epsilon(1e-14));
    CHECK(d[i] == doctest::Approx(0.5 - 0.5 * pts[i]).epsilon(1e-14));
  }
  CHECK(solve_green_zero(PowerSeries(10), 4.0).y.degree() == -1);
  CHECK(solve_dirichlet_zero(PowerSeries(10), 4.0).y.degree() == -1);
}

TEST_CASE("manufactured solutions are recovered exactly") {
  std::mt19937_64 rng(11);
  for (double N : {4.0, 5.0, 6.0}) {
    const ModelParams p = dim(N);
    const QuadratureRule r = make_rule(p, 128);
    const double l1 = eigenvalue(p, 1);
    for (double lambda : {0.0, l1 / 2.0, l1 + 0.3}) {
      for (int s = 0; s < 10; ++s) {
        const PowerSeries exact = manufactured(rng, 3 + s, 40);
        const PowerSeries f = exact * (-lambda) - exact.laplace(N / 2.0);
        const EllipticSolution sol = solve_series({lambda, f, std::nullopt}, p);
        CHECK(max_coeff_defect(sol.y, exact.with_cap(41)) < 1e-12);
        CHECK(elliptic_residual(sol.y, lambda, f, N, r) <= 1e-9 * std::max(norm(f, r), 1e-300));
        CHECK(std::abs(sol.y(1.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("Green, Dirichlet and series paths agree at lambda = 0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double N : {4.0, 4.5, 6.0}) {
    for (int s = 0; s < 20; ++s) {
      std::vector<double> c(12);
      for (auto& x : c) x = u(rng);
      const PowerSeries f(c, 40);
      const PowerSeries a = solve_green_zero(f, N).y;
      const PowerSeries b = solve_dirichlet_zero(f, N).y;
      const PowerSeries d = solve_series({0.0, f, std::nullopt}, dim(N)).y;
      CHECK(max_coeff_defect(a, b) < 1e-13);
      CHECK(max_coeff_defect(a, d) < 1e-12);
      const std::vector<double> pts = {0.0, 0.1, 0.5, 0.9, 1.0};
      const auto fg = solve_green_zero([&](double z) { return f(z); }, N, pts);
      const auto fd = solve_dirichlet_zero([&](double z) { return f(z); }, N, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(fg[i] - a(pts[i])) < 1e-12);
        CHECK(std::abs(fd[i] - a(pts[i])) < 1e-12);
      }
    }
  }
}

TEST_CASE("Green formula with an eigenfunction right side") {
  const ModelParams p = dim(4.0);
  const EigenPair e = eigenfunction(p, 1, 40);
  const QuadratureRule r = make_rule(p, 128);
  const PowerSeries f = e.phi * e.lambda;
  const EllipticSolution s = solve_green_zero(f, 4.0);
  CHECK(max_coeff_defect(s.y.with_cap(40), e.phi) < 1e-12);
  CHECK(elliptic_residual(s.y, 0.0, f, 4.0, r) < 1e-12);
}

TEST_CASE("near resonance is refused") {
  const ModelParams p = dim(4.0);
  const double l2 = eigenvalue(p, 2);
  const PowerSeries f = PowerSeries::constant(1.0, 40);
  CHECK_THROWS_AS(solve_series({l2, f, std::nullopt}, p), NearResonanceError);
  try {
    solve_series({l2 * (1 + 1e-12), f, std::nullopt}, p);
    FAIL("expected refusal");
  } catch (const NearResonanceError& e) {
    CHECK(std::abs(e.phi_at_one()) < 1e-8);
  }
  CHECK_THROWS_AS(solve_series({l2, f, 2}, p), ValidationError);
  CHECK(find_resonance(p, l2 * (1 + 1e-10)) == 2);
  CHECK_FALSE(find_resonance(p, l2 * (1 + 1e-6)).has_value());
}

TEST_CASE("resonant branch") {
  for (double N : {4.0, 6.0}) {
    const ModelParams p = dim(N);
    const QuadratureRule r = make_rule(p, 128);
    for (int q : {1, 2, 3}) {
      const EigenPair e = eigenfunction(p, q, 50);
      {
        const EllipticSolution s = solve_resonant({e.lambda, e.phi, q}, p, e, r);
        CHECK(s.projection_removed == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(norm(s.y, r) < 1e-10);
      }
      std::mt19937_64 rng(q);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::vector<double> c(10);
      for (auto& x : c) x = u(rng);
      const PowerSeries f(c, 50);
      const EllipticSolution s = solve_resonant({e.lambda, f, q}, p, e, r);
      const PowerSeries ftilde = f - e.phi * s.projection_removed;
      const double fn = norm(f, r);
      CHECK(elliptic_residual(s.y, e.lambda, ftilde, N, r) <= 1e-9 * fn);
      CHECK(std::abs(s.y(1.0)) < 1e-9);
      CHECK(std::abs(inner_product(s.y, e.phi, r)) < 1e-12);
      // Fredholm: against the un-projected f the defect is exactly the removed component.
      CHECK(std::abs(elliptic_residual(s.y, e.lambda, f, N, r) - std::abs(s.projection_removed)) < 1e-8);
      // Entire solutions: trailing coefficients decay.
      const int d = s.y.degree();
      double ratio = 0.0;
      for (int k = d - 10; k < d; ++k) ratio = std::max(ratio, std::abs(s.y[k + 1] / s.y[k]));
      CHECK(ratio < 1.0);
      // Orthogonal right side: same as a plain projected solve.
      const PowerSeries g = ftilde;
      const EllipticSolution s2 = solve_resonant({e.lambda, g, q}, p, e, r);
      CHECK(std::abs(s2.projection_removed) < 1e-12);
      CHECK(max_coeff_defect(s2.y, s.y) < 1e-10);
    }
  }
}
