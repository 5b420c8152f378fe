#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "pvw/errors.hpp"
#include "pvw/kernels.hpp"
#include "pvw/perturbation.hpp"
#include "pvw/wave_dynamics.hpp"

using namespace pvw;

namespace {

ModelParams params_for(double N) {
  ModelParams p;
  p.N = N;
  return p;
}

SpectralState advance_linear(const GalerkinModel& m, SpectralState s, double t_end, double dt) {
  const int steps = static_cast<int>(std::ceil((t_end - s.t) / dt));
  const double h = (t_end - s.t) / steps;
  for (int k = 0; k < steps; ++k) s = step_nonlinear(m, s, h);
  return s;
}

// eps a_1 = alpha (1 - z^2) cos(beta t), eps a^_2 = delta (1 + z) sin(mu t),
// forcing supplied separately.
struct Manufactured {
  double alpha = 0.3, beta = 1.3, delta = 0.4, mu = 0.7;

  LinearCoefficients at(const GalerkinModel& m, double t) const {
    LinearCoefficients a;
    a.t = t;
    for (double z : m.rule.nodes) {
      a.eps_a1.push_back(alpha * (1 - z * z) * std::cos(beta * t));
      a.eps_a1_t.push_back(-alpha * beta * (1 - z * z) * std::sin(beta * t));
      a.eps_a1_z.push_back(-2 * alpha * z * std::cos(beta * t));
      a.eps_a2hat.push_back(delta * (1 + z) * std::sin(mu * t));
      a.g.push_back(0.0);
    }
    return a;
  }
};

}  // namespace

TEST_CASE("serial and parallel kernels agree bitwise") {
  ModalMatrix b(40, 1024);
  for (int n = 0; n < b.modes; ++n)
    for (int i = 0; i < b.nodes; ++i) b(n, i) = std::sin(0.01 * (n + 1) * (i + 3));
  std::vector<double> c(40), w(1024), f(1024);
  for (int n = 0; n < 40; ++n) c[n] = 1.0 / (n + 1.0);
  for (int i = 0; i < 1024; ++i) {
    w[i] = 1.0 / 1024;
    f[i] = std::cos(0.003 * i);
  }
  std::vector<double> s1, s2, p1, p2;
  synthesize(b, c, s1, Exec::Serial);
  synthesize(b, c, s2, Exec::Parallel);
  project(b, w, f, p1, Exec::Serial);
  project(b, w, f, p2, Exec::Parallel);
  CHECK(s1 == s2);
  CHECK(p1 == p2);
  CHECK_THROWS_AS(synthesize(b, std::vector<double>(3), s1), ValidationError);
}

TEST_CASE("linear eigenmode evolution is exact") {
  GalerkinModel m = make_galerkin(params_for(4.0), 16);
  m.nonlinear = false;
  const double w1 = std::sqrt(m.lambdas[0]);
  const double period = 2 * std::numbers::pi / w1;
  SpectralState s = advance_linear(m, eigenmode_state(m, 1), 0.37 * period, default_dt(m));
  CHECK(s.c[0] == doctest::Approx(std::cos(w1 * s.t)).epsilon(1e-12));
  s = advance_linear(m, s, period, default_dt(m));
  CHECK(std::abs(s.c[0] - 1.0) < 1e-8);
  for (int n = 1; n < m.modes; ++n) CHECK(std::abs(s.c[n]) < 1e-12);

  // ten periods of mode 3
  const double w3 = std::sqrt(m.lambdas[2]);
  SpectralState s3 = advance_linear(m, eigenmode_state(m, 3), 10 * 2 * std::numbers::pi / w3, default_dt(m));
  CHECK(std::abs(s3.c[2] - 1.0) < 1e-8);
  CHECK(std::abs(s3.cdot[2]) < 1e-8 * w3);
}

TEST_CASE("zero data stays zero and radius violations are reported") {
  const GalerkinModel m = make_galerkin(params_for(4.0), 12);
  SpectralState s = zero_state(m);
  for (int k = 0; k < 20; ++k) s = step_nonlinear(m, s, default_dt(m));
  for (double c : s.c) CHECK(c == 0.0);
  SpectralState big = eigenmode_state(m, 1);
  big.c[0] = 10.0;
  CHECK_THROWS_AS(step_nonlinear(m, big, default_dt(m)), NumericalError);
  CHECK_THROWS_AS(step_nonlinear(m, s, -1.0), ValidationError);
}

TEST_CASE("linearized stepping") {
  const GalerkinModel m = make_galerkin(params_for(4.0), 16);
  const double dt = default_dt(m);
  const Manufactured mf;

  SUBCASE("zero coefficients reproduce the eigenmode") {
    LinearCoefficientField zero = [&](double t) {
      Manufactured off;
      off.alpha = off.delta = 0.0;
      return off.at(m, t);
    };
    const double w1 = std::sqrt(m.lambdas[0]);
    const LinearRun run = run_linearized(m, zero, eigenmode_state(m, 1), 2 * std::numbers::pi / w1, dt);
    CHECK(std::abs(run.final_state.c[0] - 1.0) < 1e-8);
  }

  SUBCASE("no forcing and zero data give zero") {
    LinearCoefficientField field = [&](double t) { return mf.at(m, t); };
    const LinearRun run = run_linearized(m, field, zero_state(m), 3.0, dt);
    for (double c : run.final_state.c) CHECK(c == 0.0);
  }

  SUBCASE("manufactured solution sin t phi_1") {
    const auto& e1 = m.basis[0];
    LinearCoefficientField field = [&](double t) {
      LinearCoefficients a = mf.at(m, t);
      for (int i = 0; i < m.rule.size(); ++i) {
        const double z = m.rule.nodes[i];
        const double p = e1.value(z), dp = e1.derivative(z);
        a.g[i] = std::sin(t) * (-p + (1 + a.eps_a1[i]) * e1.lambda * p + a.eps_a2hat[i] * z * dp);
      }
      return a;
    };
    SpectralState init = zero_state(m);
    init.cdot[0] = 1.0;
    const LinearRun run = run_linearized(m, field, init, 4.0, dt);
    CHECK(std::abs(run.final_state.c[0] - std::sin(4.0)) < 1e-6);
    for (int n = 1; n < m.modes; ++n) CHECK(std::abs(run.final_state.c[n]) < 1e-6);
  }

  SUBCASE("hypothesis violation is refused") {
    LinearCoefficientField strong = [&](double t) {
      Manufactured s = mf;
      s.alpha = 0.8;
      return s.at(m, t);
    };
    CHECK_THROWS_AS(step_linearized(m, eigenmode_state(m, 1), strong, dt), NumericalError);
  }
}

TEST_CASE("energy conservation, time reversal and the Gronwall bound") {
  const GalerkinModel m = make_galerkin(params_for(4.0), 16);
  const double dt = default_dt(m);
  CHECK(energy(m, zero_state(m), Manufactured{}.at(m, 0.0)) == 0.0);

  // frozen coefficients: eps a_1 = 0.3(1 - z^2), eps a^_2 = 0.4(1 + z)
  Manufactured frozen{0.3, 0.0, 0.4, 0.0};
  LinearCoefficientField field = [&](double) {
    LinearCoefficients a = frozen.at(m, 0.0);
    for (int i = 0; i < m.rule.size(); ++i) a.eps_a2hat[i] = -a.eps_a1_z[i];  // conservative pairing
    return a;
  };
  SpectralState init = eigenmode_state(m, 1);
  init.c[1] = 0.3;
  init.cdot[2] = 0.5;
  const double period = 2 * std::numbers::pi / std::sqrt(m.lambdas[0]);
  const LinearRun run = run_linearized(m, field, init, period, dt);
  const double E0 = run.trace.E.front();
  double drift = 0.0;
  for (double E : run.trace.E) drift = std::max(drift, std::abs(E / E0 - 1.0));
  CHECK(drift < 1e-6);

  SpectralState back = run.final_state;
  for (double& c : back.cdot) c = -c;
  back.t = 0.0;
  const LinearRun rev = run_linearized(m, field, back, period, dt);
  for (int n = 0; n < m.modes; ++n) {
    CHECK(std::abs(rev.final_state.c[n] - init.c[n]) < 1e-7);
    CHECK(std::abs(rev.final_state.cdot[n] + init.cdot[n]) < 1e-7);
  }

  // forced run from rest at t = -1 with a smooth ramp
  const Manufactured mf;
  LinearCoefficientField forced = [&](double t) {
    LinearCoefficients a = mf.at(m, t);
    const double r = smooth_ramp(t, 1.0);
    for (int i = 0; i < m.rule.size(); ++i) a.g[i] = r * std::cos(2.1 * t) * (1 - m.rule.nodes[i]);
    return a;
  };
  const LinearRun fr = run_linearized(m, forced, zero_state(m, -1.0), 6.0, dt);
  CHECK(fr.trace.A > 0.0);
  CHECK(fr.trace.worst_excess() <= 1e-3);
  CHECK(fr.trace.E.back() > 0.0);
}

TEST_CASE("linearized coefficients around a background") {
  ModelParams p = params_for(4.0);
  p.order = 2;
  const PerturbationResult pr = build_to_order(p);
  const GalerkinModel m = make_galerkin(p, 16);
  const SpectralState w0 = zero_state(m, 0.4);

  const TrigPoly none = pr.partial_sum(0.0);
  const LinearCoefficients z0 = assemble_linear_coeffs(m, none, w0, 0.0, 2);
  for (std::size_t i = 0; i < z0.eps_a1.size(); ++i) {
    CHECK(z0.eps_a1[i] == 0.0);
    CHECK(z0.eps_a2hat[i] == 0.0);
  }

  // eps a_1 ~ -3 eps v_1 for small eps (N = 4)
  const double eps = 1e-6;
  ModelParams p1 = p;
  p1.order = 1;
  const PerturbationResult first = build_to_order(p1);
  const LinearCoefficients small = assemble_linear_coeffs(m, first.partial_sum(eps), w0, eps, 1);
  const PowerSeries v1 = first.orders[0].at(0.4).d() * -1.0;
  for (int i = 0; i < m.rule.size(); i += 7) {
    const double expect = -3.0 * eps * v1(m.rule.nodes[i]);
    CHECK(small.eps_a1[i] == doctest::Approx(expect).epsilon(1e-4));
  }

  // eps a_2 / z from differences matches eps a^_2 near z = 0
  const double e = 0.01;
  SpectralState w = w0;
  w.c[1] = 0.2;
  w.cdot[0] = 0.1;
  const LinearCoefficients lc = assemble_linear_coeffs(m, pr.partial_sum(e), w, e, 2);
  const GridFunction a2 = eps_a2_by_differences(m, pr.partial_sum(e), w, e, 2);
  const double r0 = a2[0] / m.rule.nodes[0], r1 = a2[1] / m.rule.nodes[1];
  CHECK(std::abs(r0 / r1 - 1.0) < 0.05);
  for (int i = 0; i < m.rule.size(); ++i) CHECK(a2[i] == doctest::Approx(lc.eps_a2(m.rule)[i]).epsilon(1e-6).scale(1e-9));
  CHECK(lc.hypothesis_holds());
  // d_z a_1 + a^_2 vanishes for coefficients built from a background
  for (int i = 0; i < m.rule.size(); ++i) CHECK(std::abs(lc.eps_a1_z[i] + lc.eps_a2hat[i]) < 1e-14);
}

TEST_CASE("density reconstruction") {
  for (double N : {4.0, 6.0}) {
    const ModelParams p = params_for(N);
    const DensityProfile eq = reconstruct_density(PowerSeries(10), p, uniform_grid(11));
    CHECK(eq.x_F == 1.0);
    CHECK(eq.exponent == doctest::Approx(1.0 / (p.gamma() - 1.0)).epsilon(1e-12));
    if (N == 4.0)
      for (std::size_t k = 0; k < eq.x.size(); ++k) CHECK(eq.rho[k] == doctest::Approx(1.0 - eq.x[k]));
  }
  const ModelParams p = params_for(4.0);
  const double delta = 0.01;
  const DensityProfile d = reconstruct_density(PowerSeries::monomial(1, delta, 10), p, uniform_grid(5));
  CHECK(d.x_F == 1.0);
  for (std::size_t k = 0; k < d.z.size(); ++k) CHECK(d.rho[k] == doctest::Approx(d.z[k] / (1 - delta)));
  CHECK_THROWS_AS(reconstruct_density(PowerSeries::monomial(1, 2.0, 10), p, uniform_grid(5)), NumericalError);

  const GalerkinModel m = make_galerkin(p, 8);
  SpectralState s = eigenmode_state(m, 1);
  s.c[0] = 0.01;
  const DensityProfile g = reconstruct_density(m, s, uniform_grid(9));
  CHECK(g.x_F == doctest::Approx(1.0 + 0.01 * m.basis[0].value(0.0)));
  CHECK(g.exponent == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("nonlinear run tracks the perturbation series") {
  for (int K : {1, 2}) {
    ModelParams p = params_for(4.0);
    p.order = K;
    const PerturbationResult pr = build_to_order(p);
    const GalerkinModel m = make_galerkin(p, 16);
    const ConvergenceScan scan =
        convergence_scan(m, pr, {1e-3, 2e-3, 4e-3, 8e-3}, 2.0 * pr.period(), default_dt(m));
    CHECK(scan.slope >= K + 0.9);
    for (const auto& r : scan.runs) CHECK(std::isfinite(r.max_error));
  }
}

TEST_CASE("trajectory csv") {
  const GalerkinModel m = make_galerkin(params_for(4.0), 4);
  SpectralState s = eigenmode_state(m, 1);
  s.c[0] = 1e-3;
  const auto samples = run_nonlinear(m, s, 1.0, default_dt(m), 10);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.back().t == doctest::Approx(1.0));
  std::ostringstream os;
  write_trajectory_csv(os, samples);
  std::string header;
  std::istringstream is(os.str());
  std::getline(is, header);
  CHECK(header == "t,c1,c2,c3,c4,E,x_F");
}
