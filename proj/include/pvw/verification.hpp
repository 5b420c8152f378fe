#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvw/wave_dynamics.hpp"

namespace pvw {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct CheckSuite {
  std::vector<Check> checks;
  void add(Check c) { checks.push_back(std::move(c)); }
  void add(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
  bool all_passed() const;
  std::vector<std::string> failures() const;
  std::string text() const;
  std::string json() const;
};

/// measured <= limit.
Check at_most(std::string name, double measured, double limit, std::string detail = {});
/// measured >= limit.
Check at_least(std::string name, double measured, double limit, std::string detail = {});

/// Gamma at reference arguments and the closed form of J_{1/2}.
std::vector<Check> check_reference_values();

/// j_{1/2,n} = n pi for n <= 20 and lambda_50 / (pi^2 50^2 / 4) near 1.
std::vector<Check> check_bessel_layer(const std::vector<double>& Ns);

/// max |(phi_m|phi_n) - delta_mn| for m, n <= count.
Check check_orthonormality(double N, int count = 20, int points = 128);

/// Manufactured polynomial problems at lambda in {0, lambda_1/2, lambda_1 + 0.3},
/// Green/series agreement at lambda = 0 and the Fredholm identity.
std::vector<Check> check_elliptic(double N, int problems = 50, std::uint64_t seed = 7);

std::vector<Check> check_identities(int degree = 30);

/// Case decision at L = 2, second-order structure, mean free-boundary
/// displacement and residual slopes for each K in `orders`. Slopes must reach
/// K + 0.9; at N = 4 they must also sit within 0.05 of K + 1.
std::vector<Check> check_perturbation(double N, const std::vector<int>& orders);

/// Nonlinear Galerkin runs against y^{(K)}: error exponent >= K + 0.9.
std::vector<Check> check_nonlinear_tracking(double N, const std::vector<int>& orders, int modes = 32);

/// Manufactured linearized coefficients with |eps a_1| <= 0.45 and a ramped
/// forcing that vanishes for t <= -1/2. Deterministic in `seed`.
LinearCoefficientField manufactured_field(const GalerkinModel& model, std::uint64_t seed);

/// Gronwall majorant on `runs` manufactured linearized runs over [-1, t_end],
/// plus the a_2 = z a^_2 factorization around a perturbation background.
std::vector<Check> check_energy(double N, int runs = 20, int modes = 32, double t_end = 4.0);

/// Density exponent, x_F bookkeeping and the mean boundary displacement.
std::vector<Check> check_vacuum(const std::vector<double>& Ns);

/// Scan of J_nu(L j_{nu,n}) for nu in {1, 1.5, 2, 3} plus the nu = 1/2 control row.
std::vector<Check> check_conjecture(int n_max = 20, int L_max = 10);

}  // namespace pvw
