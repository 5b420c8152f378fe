#include "pvw/wave_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <iomanip>
#include <ostream>

#include "pvw/errors.hpp"
#include "pvw/numerics.hpp"

namespace pvw {

namespace {

struct Phase {
  std::vector<double> c, d;
};

// Nonlinear part of the first-order system: (0, f(t, c, cdot)).
using Forcing = std::function<void(double t, const Phase& u, std::vector<double>& f)>;

double phase_norm(const Phase& u) {
  double s = 0.0;
  for (std::size_t n = 0; n < u.c.size(); ++n) s += u.c[n] * u.c[n] + u.d[n] * u.d[n];
  return std::sqrt(s);
}

// Exact flow of c'' = -lambda c over time h.
Phase rotate(const Phase& u, const std::vector<double>& lambdas, double h) {
  Phase out{u.c, u.d};
  for (std::size_t n = 0; n < u.c.size(); ++n) {
    const double w = std::sqrt(lambdas[n]);
    const double co = std::cos(w * h), si = std::sin(w * h);
    out.c[n] = co * u.c[n] + si / w * u.d[n];
    out.d[n] = -w * si * u.c[n] + co * u.d[n];
  }
  return out;
}

// Exact flow applied to (0, f).
Phase rotate_forcing(const std::vector<double>& f, const std::vector<double>& lambdas, double h) {
  Phase out{std::vector<double>(f.size()), std::vector<double>(f.size())};
  for (std::size_t n = 0; n < f.size(); ++n) {
    const double w = std::sqrt(lambdas[n]);
    out.c[n] = std::sin(w * h) / w * f[n];
    out.d[n] = std::cos(w * h) * f[n];
  }
  return out;
}

void axpy(Phase& y, double a, const Phase& x) {
  for (std::size_t n = 0; n < y.c.size(); ++n) {
    y.c[n] += a * x.c[n];
    y.d[n] += a * x.d[n];
  }
}

SpectralState lawson_rk4(const GalerkinModel& model, const SpectralState& s, double h, const Forcing& force) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("time step must be positive");
  if (s.mode_count() != model.modes || static_cast<int>(s.cdot.size()) != model.modes)
    throw ValidationError("state does not match the model's mode count");
  const auto& lam = model.lambdas;
  const Phase u{s.c, s.cdot};
  std::vector<double> k1, k2, k3, k4;

  force(s.t, u, k1);
  Phase u2 = u;
  for (std::size_t n = 0; n < k1.size(); ++n) u2.d[n] += 0.5 * h * k1[n];
  u2 = rotate(u2, lam, 0.5 * h);
  force(s.t + 0.5 * h, u2, k2);

  const Phase half = rotate(u, lam, 0.5 * h);
  Phase u3 = half;
  for (std::size_t n = 0; n < k2.size(); ++n) u3.d[n] += 0.5 * h * k2[n];
  force(s.t + 0.5 * h, u3, k3);

  const Phase full = rotate(u, lam, h);
  Phase u4 = full;
  axpy(u4, h, rotate_forcing(k3, lam, 0.5 * h));
  force(s.t + h, u4, k4);

  Phase out = full;
  axpy(out, h / 6.0, rotate_forcing(k1, lam, h));
  std::vector<double> k23(k2.size());
  for (std::size_t n = 0; n < k2.size(); ++n) k23[n] = k2[n] + k3[n];
  axpy(out, h / 3.0, rotate_forcing(k23, lam, 0.5 * h));
  for (std::size_t n = 0; n < k4.size(); ++n) out.d[n] += h / 6.0 * k4[n];

  // Growth is measured against the state plus what the forcing alone can add.
  double push = 0.0;
  for (const auto* k : {&k1, &k2, &k3, &k4}) {
    double s2 = 0.0;
    for (double x : *k) s2 += x * x;
    push = std::max(push, h * std::sqrt(s2));
  }
  const double before = phase_norm(u) + push, after = phase_norm(out);
  if (!std::isfinite(after)) throw NumericalError("time step produced non-finite coefficients");
  if (after > 1e3 * before) throw NumericalError("blow-up: coefficient norm grew by more than 1e3 in one step");
  return SpectralState{s.t + h, std::move(out.c), std::move(out.d)};
}

ModalMatrix tabulate(const std::vector<EigenPair>& basis, const QuadratureRule& rule,
                     double (EigenPair::*f)(double) const) {
  ModalMatrix m(static_cast<int>(basis.size()), rule.size());
  for (int n = 0; n < m.modes; ++n)
    for (int i = 0; i < m.nodes; ++i) m(n, i) = (basis[n].*f)(rule.nodes[i]);
  return m;
}

std::vector<double> projected(const GalerkinModel& model, const GridFunction& f) {
  std::vector<double> out;
  project(model.phi, model.rule.weights, f, out, model.exec);
  return out;
}

double grid_norm(const GridFunction& f, const QuadratureRule& rule) { return norm(f, rule); }

double sup_abs(const GridFunction& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

// Node values of y, y_z, y_zz and their time derivatives for y^{(K)} + eps^K w.
struct Background {
  GridFunction yz, yzz, yzt, lap;
};

Background background(const GalerkinModel& model, const TrigPoly& y_series, const SpectralState& w, double epsilon,
                      int K) {
  const double scale = std::pow(epsilon, K);
  const double h = model.params.half_dim();
  const double t = w.t;
  const PowerSeries Y = y_series.at(t);
  const PowerSeries Yz = Y.d();
  const PowerSeries Yzz = Yz.d();
  const PowerSeries Yzt = y_series.d_t().at(t).d();
  std::vector<double> sc(w.c.size()), sd(w.cdot.size());
  for (std::size_t n = 0; n < sc.size(); ++n) {
    sc[n] = scale * w.c[n];
    sd[n] = scale * w.cdot[n];
  }
  GridFunction wz, wzz, wzt;
  synthesize(model.dphi, sc, wz, model.exec);
  synthesize(model.d2phi, sc, wzz, model.exec);
  synthesize(model.dphi, sd, wzt, model.exec);
  Background b;
  const int q = model.rule.size();
  b.yz.resize(q);
  b.yzz.resize(q);
  b.yzt.resize(q);
  b.lap.resize(q);
  for (int i = 0; i < q; ++i) {
    const double z = model.rule.nodes[i];
    b.yz[i] = Yz(z) + wz[i];
    b.yzz[i] = Yzz(z) + wzz[i];
    b.yzt[i] = Yzt(z) + wzt[i];
    b.lap[i] = z * b.yzz[i] + h * b.yz[i];
  }
  return b;
}

template <class F>
double five_point(const F& f, double x) {
  const double d = 1e-4;
  return (8.0 * (f(x + d) - f(x - d)) - (f(x + 2 * d) - f(x - 2 * d))) / (12.0 * d);
}

}  // namespace

GalerkinModel make_galerkin(const ModelParams& params, int modes, int points) {
  if (modes < 1) throw ValidationError("mode count must be positive");
  GalerkinModel m;
  m.params = params;
  m.modes = modes;
  m.rule = make_rule(params, points > 0 ? points : std::max(2 * modes, params.quadrature_points));
  m.basis = eigen_basis(params, modes);
  for (const auto& e : m.basis) m.lambdas.push_back(e.lambda);
  m.phi = tabulate(m.basis, m.rule, &EigenPair::value);
  m.dphi = tabulate(m.basis, m.rule, &EigenPair::derivative);
  m.d2phi = tabulate(m.basis, m.rule, &EigenPair::second_derivative);
  return m;
}

double default_dt(const GalerkinModel& model) { return 0.1 / std::sqrt(model.lambdas.back()); }

SpectralState zero_state(const GalerkinModel& model, double t) {
  return SpectralState{t, std::vector<double>(static_cast<std::size_t>(model.modes), 0.0),
                       std::vector<double>(static_cast<std::size_t>(model.modes), 0.0)};
}

SpectralState eigenmode_state(const GalerkinModel& model, int n, double t) {
  if (n < 1 || n > model.modes) throw ValidationError("eigenmode index outside the model");
  SpectralState s = zero_state(model, t);
  s.c[n - 1] = 1.0;
  return s;
}

SpectralState project_state(const GalerkinModel& model, const PowerSeries& y, const PowerSeries& yt, double t) {
  return SpectralState{t, projected(model, sample(y, model.rule)), projected(model, sample(yt, model.rule))};
}

GridFunction node_values(const GalerkinModel& model, const std::vector<double>& c) {
  GridFunction out;
  synthesize(model.phi, c, out, model.exec);
  return out;
}

GridFunction node_derivative(const GalerkinModel& model, const std::vector<double>& c) {
  GridFunction out;
  synthesize(model.dphi, c, out, model.exec);
  return out;
}

double coefficient_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ValidationError("coefficient vectors differ in length");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += (a[n] - b[n]) * (a[n] - b[n]);
  return std::sqrt(s);
}

SpectralState step_nonlinear(const GalerkinModel& model, const SpectralState& state, double dt) {
  const double gamma = model.params.gamma();
  const double h = model.params.half_dim();
  const int q = model.rule.size();
  Forcing force = [&](double, const Phase& u, std::vector<double>& f) {
    if (!model.nonlinear) {
      f.assign(u.c.size(), 0.0);
      return;
    }
    std::vector<double> lc(u.c.size());
    for (std::size_t n = 0; n < lc.size(); ++n) lc[n] = -model.lambdas[n] * u.c[n];
    GridFunction lap, yz;
    synthesize(model.phi, lc, lap, model.exec);
    synthesize(model.dphi, u.c, yz, model.exec);
    GridFunction rhs(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      const double v = -yz[i];
      if (!(std::abs(v) < 1.0)) throw NumericalError("amplitude left the nonlinearity radius (|v| >= 1)");
      rhs[i] = gas_GI(gamma, v) * lap[i] + gas_GII(gamma, h, v);
    }
    f = projected(model, rhs);
  };
  return lawson_rk4(model, state, dt, force);
}

GridFunction LinearCoefficients::eps_a2(const QuadratureRule& rule) const {
  GridFunction out(eps_a2hat.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rule.nodes[i] * eps_a2hat[i];
  return out;
}

double LinearCoefficients::max_abs_eps_a1() const { return sup_abs(eps_a1); }

double LinearCoefficients::growth_rate(const QuadratureRule& rule) const {
  double mixed = 0.0;
  for (std::size_t i = 0; i < eps_a1_z.size(); ++i)
    mixed = std::max(mixed, std::sqrt(rule.nodes[i]) * std::abs(eps_a1_z[i] + eps_a2hat[i]));
  return sup_abs(eps_a1_t) + std::sqrt(2.0) * mixed;
}

LinearCoefficients assemble_linear_coeffs(const GalerkinModel& model, const TrigPoly& y_series,
                                          const SpectralState& w, double epsilon, int K) {
  if (K < 1) throw ValidationError("perturbation order must be positive");
  const double gamma = model.params.gamma();
  const Background b = background(model, y_series, w, epsilon, K);
  const std::size_t q = b.yz.size();
  LinearCoefficients out;
  out.t = w.t;
  out.eps_a1.resize(q);
  out.eps_a2hat.resize(q);
  out.g.assign(q, 0.0);
  out.eps_a1_t.resize(q);
  out.eps_a1_z.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double v = -b.yz[i];
    const double d2 = gas_D2G(gamma, v);
    out.eps_a1[i] = gas_GI(gamma, v);
    out.eps_a2hat[i] = d2 * b.yzz[i];
    out.eps_a1_z[i] = -d2 * b.yzz[i];
    out.eps_a1_t[i] = -d2 * b.yzt[i];
  }
  return out;
}

GridFunction eps_a2_by_differences(const GalerkinModel& model, const TrigPoly& y_series, const SpectralState& w,
                                   double epsilon, int K) {
  const double gamma = model.params.gamma();
  const double h = model.params.half_dim();
  const Background b = background(model, y_series, w, epsilon, K);
  GridFunction out(b.yz.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = -b.yz[i];
    const double dGI = five_point([&](double x) { return gas_GI(gamma, x); }, v);
    const double dGII = five_point([&](double x) { return gas_GII(gamma, h, x); }, v);
    out[i] = dGI * b.lap[i] + dGII;
  }
  return out;
}

SpectralState step_linearized(const GalerkinModel& model, const SpectralState& state,
                              const LinearCoefficientField& coeffs, double dt) {
  const int q = model.rule.size();
  Forcing force = [&](double t, const Phase& u, std::vector<double>& f) {
    const LinearCoefficients a = coeffs(t);
    if (static_cast<int>(a.eps_a1.size()) != q || static_cast<int>(a.eps_a2hat.size()) != q ||
        static_cast<int>(a.g.size()) != q)
      throw ValidationError("coefficient grids do not match the model's nodes");
    if (!a.hypothesis_holds()) throw NumericalError("|eps a_1| exceeds 1/2; the energy estimate does not apply");
    std::vector<double> lc(u.c.size());
    for (std::size_t n = 0; n < lc.size(); ++n) lc[n] = -model.lambdas[n] * u.c[n];
    GridFunction lap, hz;
    synthesize(model.phi, lc, lap, model.exec);
    synthesize(model.dphi, u.c, hz, model.exec);
    GridFunction rhs(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i)
      rhs[i] = a.eps_a1[i] * lap[i] - a.eps_a2hat[i] * model.rule.nodes[i] * hz[i] + a.g[i];
    f = projected(model, rhs);
  };
  return lawson_rk4(model, state, dt, force);
}

double energy(const GalerkinModel& model, const SpectralState& state, const LinearCoefficients& coeffs) {
  const GridFunction ht = node_values(model, state.cdot);
  const GridFunction hz = node_derivative(model, state.c);
  double e = 0.0;
  for (int i = 0; i < model.rule.size(); ++i) {
    const double z = model.rule.nodes[i];
    const double a = coeffs.eps_a1.empty() ? 0.0 : coeffs.eps_a1[i];
    e += model.rule.weights[i] * (ht[i] * ht[i] + (1.0 + a) * z * hz[i] * hz[i]);
  }
  return e;
}

double EnergyTrace::worst_excess() const {
  double worst = -INFINITY;
  for (std::size_t k = 0; k < E.size(); ++k) {
    // Subnormal energies carry too few significant bits for a relative test.
    if (E[k] < std::numeric_limits<double>::min()) continue;
    const double root = std::sqrt(E[k]);
    if (bound[k] == 0.0) return INFINITY;
    worst = std::max(worst, root / bound[k] - 1.0);
  }
  return std::isfinite(worst) ? worst : 0.0;
}

LinearRun run_linearized(const GalerkinModel& model, const LinearCoefficientField& coeffs,
                         const SpectralState& initial, double t_end, double dt) {
  if (!(t_end > initial.t)) throw ValidationError("final time must exceed the initial time");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const int steps = static_cast<int>(std::ceil((t_end - initial.t) / dt - 1e-9));
  const double h = (t_end - initial.t) / steps;

  double A = 0.0;
  LinearCoefficientField recorded = [&](double t) {
    LinearCoefficients a = coeffs(t);
    A = std::max(A, a.growth_rate(model.rule));
    return a;
  };

  LinearRun run;
  std::vector<double> g_at, g_mid;
  SpectralState s = initial;
  for (int k = 0;; ++k) {
    const LinearCoefficients a = recorded(s.t);
    run.trace.times.push_back(s.t);
    run.trace.E.push_back(energy(model, s, a));
    g_at.push_back(grid_norm(a.g, model.rule));
    if (k == steps) break;
    g_mid.push_back(grid_norm(recorded(s.t + 0.5 * h).g, model.rule));
    s = step_linearized(model, s, recorded, h);
  }
  run.final_state = s;

  // Simpson per step for int e^{A(t-s)} ||g(s)|| ds.
  run.trace.A = A;
  const double grow = std::exp(A * h), grow_half = std::exp(0.5 * A * h);
  double b = std::sqrt(std::max(run.trace.E.front(), 0.0));
  run.trace.bound.push_back(b);
  for (int k = 0; k < steps; ++k) {
    b = grow * b + h / 6.0 * (grow * g_at[k] + 4.0 * grow_half * g_mid[k] + g_at[k + 1]);
    run.trace.bound.push_back(b);
  }
  return run;
}

double smooth_ramp(double t, double tau) {
  if (!(tau > 0.0)) throw ValidationError("ramp length must be positive");
  const double s = (t + 0.5 * tau) / (0.5 * tau);
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

DensityProfile reconstruct_density(const std::function<double(double)>& y, const std::function<double(double)>& dy,
                                   const ModelParams& params, const std::vector<double>& z_grid) {
  const double expo = 1.0 / (params.gamma() - 1.0);
  const double y0 = y(0.0);
  DensityProfile p;
  p.x_F = 1.0 + y0;
  auto density = [&](double z) {
    const double one_plus_v = 1.0 - dy(z);
    if (!(one_plus_v > 0.0)) throw NumericalError("interior vacuum: 1 + v <= 0 at z = " + std::to_string(z));
    return std::pow(z, expo) / one_plus_v;
  };
  for (double z : z_grid) {
    p.z.push_back(z);
    p.x.push_back(1.0 - z + y(z));
    p.rho.push_back(density(z));
  }
  std::vector<double> gap, rho;
  for (int k = 0; k <= 40; ++k) {
    const double z = std::pow(10.0, -6.0 + 4.0 * k / 40.0);
    gap.push_back(z + (y0 - y(z)));
    rho.push_back(density(z));
  }
  p.exponent = loglog_slope(gap, rho);
  return p;
}

DensityProfile reconstruct_density(const PowerSeries& y, const ModelParams& params, const std::vector<double>& z_grid) {
  const PowerSeries dy = y.d();
  return reconstruct_density([&](double z) { return y(z); }, [&](double z) { return dy(z); }, params, z_grid);
}

DensityProfile reconstruct_density(const GalerkinModel& model, const SpectralState& state,
                                   const std::vector<double>& z_grid) {
  auto y = [&](double z) {
    double s = 0.0;
    for (int n = 0; n < model.modes; ++n) s += state.c[n] * model.basis[n].value(z);
    return s;
  };
  auto dy = [&](double z) {
    double s = 0.0;
    for (int n = 0; n < model.modes; ++n) s += state.c[n] * model.basis[n].derivative(z);
    return s;
  };
  return reconstruct_density(y, dy, model.params, z_grid);
}

std::vector<double> uniform_grid(int count) {
  if (count < 2) throw ValidationError("grid needs at least 2 points");
  std::vector<double> z(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) z[k] = static_cast<double>(k) / (count - 1);
  return z;
}

std::vector<TrajectorySample> run_nonlinear(const GalerkinModel& model, const SpectralState& initial, double t_end,
                                            double dt, int stride) {
  if (!(t_end > initial.t)) throw ValidationError("final time must exceed the initial time");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (stride < 1) throw ValidationError("sampling stride must be positive");
  const int steps = static_cast<int>(std::ceil((t_end - initial.t) / dt - 1e-9));
  const double h = (t_end - initial.t) / steps;
  std::vector<double> at_zero(static_cast<std::size_t>(model.modes));
  for (int n = 0; n < model.modes; ++n) at_zero[n] = model.basis[n].value(0.0);
  const LinearCoefficients flat{0.0, {}, {}, {}, {}, {}};

  std::vector<TrajectorySample> out;
  auto record = [&](const SpectralState& s) {
    TrajectorySample r;
    r.t = s.t;
    r.c = s.c;
    r.energy = energy(model, s, flat);
    double y0 = 0.0;
    for (int n = 0; n < model.modes; ++n) y0 += s.c[n] * at_zero[n];
    r.x_F = 1.0 + y0;
    out.push_back(std::move(r));
  };
  SpectralState s = initial;
  record(s);
  for (int k = 1; k <= steps; ++k) {
    s = step_nonlinear(model, s, h);
    if (k % stride == 0 || k == steps) record(s);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& samples) {
  const std::size_t m = samples.empty() ? 0 : samples.front().c.size();
  os << "t";
  for (std::size_t n = 1; n <= m; ++n) os << ",c" << n;
  os << ",E,x_F\n";
  os << std::setprecision(17);
  for (const auto& s : samples) {
    os << s.t;
    for (double c : s.c) os << ',' << c;
    os << ',' << s.energy << ',' << s.x_F << '\n';
  }
}

SeriesComparison compare_with_series(const GalerkinModel& model, const PerturbationResult& series, double epsilon,
                                     double t_end, double dt, int check_stride) {
  if (check_stride < 1) throw ValidationError("check stride must be positive");
  const TrigPoly y = series.partial_sum(epsilon);
  const TrigPoly yt = y.d_t();
  SpectralState s = project_state(model, y.at(0.0), yt.at(0.0), 0.0);
  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / steps;
  SeriesComparison out;
  out.epsilon = epsilon;
  for (int k = 1; k <= steps; ++k) {
    s = step_nonlinear(model, s, h);
    if (k % check_stride == 0 || k == steps) {
      const std::vector<double> ref = projected(model, sample(y.at(s.t), model.rule));
      out.max_error = std::max(out.max_error, coefficient_distance(s.c, ref));
    }
  }
  return out;
}

ConvergenceScan convergence_scan(const GalerkinModel& model, const PerturbationResult& series,
                                 const std::vector<double>& epsilons, double t_end, double dt) {
  if (epsilons.size() < 2) throw ValidationError("convergence scan needs at least two amplitudes");
  ConvergenceScan scan;
  scan.runs.resize(epsilons.size());
  std::exception_ptr failure;
  GalerkinModel serial = model;
  serial.exec = Exec::Serial;
  const int count = static_cast<int>(epsilons.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      scan.runs[i] = compare_with_series(serial, series, epsilons[i], t_end, dt);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<double> e, err;
  for (const auto& r : scan.runs) {
    e.push_back(std::abs(r.epsilon));
    err.push_back(r.max_error);
  }
  scan.slope = loglog_slope(e, err);
  return scan;
}

}  // namespace pvw
