#include "pvw/perturbation.hpp"


#include <cmath>
#include "json.hpp"
#include <numbers>

#include "pvw/elliptic_solver.hpp"
#include "pvw/errors.hpp"
#include "pvw/special_functions.hpp"

namespace pvw {

namespace {

struct Complex {
  PowerSeries re, im;
};

Complex zero_complex(int cap) { return {PowerSeries(cap), PowerSeries(cap)}; }

double min_zero_gap(double target_j, const std::vector<double>& lambdas, int* nearest = nullptr) {
  double best = INFINITY;
  for (std::size_t q = 0; q < lambdas.size(); ++q) {
    const double gap = std::abs(target_j - 2.0 * std::sqrt(lambdas[q]));
    if (gap < best) {
      best = gap;
      if (nearest) *nearest = static_cast<int>(q) + 1;
    }
  }
  return best;
}

std::string case_label(int order, int L, bool resonant) {
  if (L == 0) return "static";
  if (L == 1) return resonant ? "secular" : "non-resonant";
  if (order == 2 && L == 2) return resonant ? "Case-2" : "Case-1";
  if (order == 3 && L == 3) return resonant ? "Case-1.2" : "Case-1.1";
  return resonant ? "resonant" : "non-resonant";
}

PowerSeries solve_plain(double lambda, const PowerSeries& f, const PerturbationContext& ctx) {
  if (f.degree() < 0) return PowerSeries(ctx.cap);
  if (lambda == 0.0) return solve_dirichlet_zero(f, ctx.params.N).y.with_cap(ctx.cap);
  return solve_series({lambda, f, std::nullopt}, ctx.params).y.with_cap(ctx.cap);
}

}  // namespace

PerturbationContext make_context(const ModelParams& params, std::optional<double> omega_override) {
  if (!(params.N > 2.0)) throw ValidationError("N must exceed 2");
  if (params.order < 1) throw ValidationError("order K must be >= 1");
  PerturbationContext ctx;
  ctx.params = params;
  ctx.cap = params.working_degree;
  ctx.fundamental = eigenfunction(params, params.n0, params.working_degree);
  ctx.omega = omega_override.value_or(std::sqrt(ctx.fundamental.lambda));
  if (!(ctx.omega > 0.0)) throw ValidationError("base frequency must be positive");
  ctx.nonlin = build_nonlinearity(params.N, std::max(2, params.order + 1));
  ctx.rule = make_rule(params, params.quadrature_points);
  const double top_j = 2.0 * (params.order + 1) * ctx.omega;
  const int count = static_cast<int>(std::ceil(top_j / std::numbers::pi)) + 6;
  ctx.lambdas = eigenvalues(params, count);
  return ctx;
}

TrigPoly build_y1(const PerturbationContext& ctx) {
  TrigPoly y(ctx.omega, ctx.params.theta0, ctx.cap);
  y.add({0, 1, Parity::Sin}, ctx.fundamental.phi);
  return y;
}

TrigPoly assemble_rhs(const std::vector<TrigPoly>& orders, int k, const PerturbationContext& ctx) {
  if (k < 2 || static_cast<int>(orders.size()) < k - 1) {
    throw ValidationError("order " + std::to_string(k) + " needs y_1 .. y_{k-1}");
  }
  const double h = ctx.params.half_dim();
  const TrigPoly& ref = orders.front();
  auto empty = [&] { return TrigPoly(ref.omega(), ref.theta0(), ctx.cap); };
  // v[j] = -d_z y_j, lap[j] = lap y_j for j = 1 .. k-1
  std::vector<TrigPoly> v(static_cast<std::size_t>(k)), lap(static_cast<std::size_t>(k));
  for (int j = 1; j < k; ++j) {
    v[j] = orders[j - 1].d_z() * -1.0;
    lap[j] = orders[j - 1].laplace(h);
  }
  // P[l][m]: eps^m coefficient of (sum_j eps^j v_j)^l
  const int lmax = k;
  if (ctx.nonlin.order() < lmax) throw ValidationError("nonlinearity expansion too short for this order");
  std::vector<std::vector<TrigPoly>> P(static_cast<std::size_t>(lmax) + 1,
                                       std::vector<TrigPoly>(static_cast<std::size_t>(k) + 1, empty()));
  for (int m = 1; m < k; ++m) P[1][m] = v[m];
  for (int l = 2; l <= lmax; ++l) {
    for (int m = l; m <= k; ++m) {
      for (int j = 1; j <= m - (l - 1) && j < k; ++j) {
        if (P[l - 1][m - j].empty()) continue;
        P[l][m] += P[l - 1][m - j] * v[j];
      }
    }
  }
  TrigPoly rhs = empty();
  for (int l = 1; l <= lmax; ++l) {
    const double gI = ctx.nonlin.gI[l];
    for (int m = l; m < k; ++m) {
      const int j = k - m;
      if (gI != 0.0 && !P[l][m].empty()) rhs += (P[l][m] * lap[j]) * gI;
    }
    if (l >= 2 && ctx.nonlin.gII[l] != 0.0 && !P[l][k].empty()) rhs += P[l][k] * ctx.nonlin.gII[l];
  }
  return rhs;
}

ModeSolution solve_mode(int M, int L, Parity parity, const PowerSeries& f, const PerturbationContext& ctx) {
  if (M < 0 || L < 0) throw ValidationError("mode indices must be nonnegative");
  ModeSolution out{TrigPoly(ctx.omega, ctx.params.theta0, ctx.cap), {}};
  out.record.key = {M, L, parity};
  if (f.degree() < 0 || (L == 0 && parity == Parity::Sin)) return out;

  const double kappa = L * ctx.omega;
  const double lambda = kappa * kappa;
  const int cap = ctx.cap;
  // Complex forcing F with Re(e^{i L Theta} F) = trig(L Theta) f.
  Complex F = zero_complex(cap);
  if (parity == Parity::Cos || L == 0) {
    F.re = f.with_cap(cap);
  } else {
    F.im = (-f).with_cap(cap);
  }

  int q = 0;
  if (L > 0) {
    for (std::size_t i = 0; i < ctx.lambdas.size(); ++i) {
      if (is_resonant(lambda, ctx.lambdas[i])) q = static_cast<int>(i) + 1;
    }
    out.record.margin = min_zero_gap(2.0 * kappa, ctx.lambdas);
  }
  out.record.resonant = q > 0;
  out.record.q = q;

  std::vector<Complex> Y(static_cast<std::size_t>(M) + 3, zero_complex(cap));
  auto ladder_rhs = [&](int p) {
    Complex r = zero_complex(cap);
    if (p == M) r = F;
    const double a = (p + 2.0) * (p + 1.0);
    const double b = 2.0 * kappa * (p + 1.0);
    r.re -= Y[p + 2].re * a;
    r.im -= Y[p + 2].im * a;
    // -i b (x + i y) = b y - i b x
    r.re += Y[p + 1].im * b;
    r.im -= Y[p + 1].re * b;
    return r;
  };

  if (q == 0) {
    for (int p = M; p >= 0; --p) {
      const Complex r = ladder_rhs(p);
      try {
        Y[p] = {solve_plain(lambda, r.re, ctx), solve_plain(lambda, r.im, ctx)};
      } catch (const NearResonanceError& e) {
        int nearest = 0;
        min_zero_gap(2.0 * kappa, ctx.lambdas, &nearest);
        const double gap = std::abs(lambda - ctx.lambdas[nearest - 1]) / ctx.lambdas[nearest - 1];
        throw NumericalError("ambiguous near-resonance at L = " + std::to_string(L) +
                             ": non-resonant branch |Phi(lambda)| = " + std::to_string(std::abs(e.phi_at_one())) +
                             ", resonant branch relative gap = " + std::to_string(gap));
      }
    }
  } else {
    const EigenPair phi = eigenfunction(ctx.params, q, cap);
    const PowerSeries& pq = phi.phi;
    // phi_q amplitudes alpha_p (complex), gauge alpha_0 = 0.
    std::vector<double> are(static_cast<std::size_t>(M) + 3, 0.0), aim(static_cast<std::size_t>(M) + 3, 0.0);
    const double Fq_re = inner_product(F.re, pq, ctx.rule);
    const double Fq_im = inner_product(F.im, pq, ctx.rule);
    out.record.projection = parity == Parity::Cos ? Fq_re : -Fq_im;
    for (int p = M; p >= 0; --p) {
      double nre = -(p + 2.0) * (p + 1.0) * are[p + 2];
      double nim = -(p + 2.0) * (p + 1.0) * aim[p + 2];
      if (p == M) {
        nre += Fq_re;
        nim += Fq_im;
      }
      // divide by 2 i kappa (p+1): (x + i y) / (i c) = y / c - i x / c
      const double c = 2.0 * kappa * (p + 1.0);
      are[p + 1] = nim / c;
      aim[p + 1] = -nre / c;
    }
    Y[M + 1] = {pq * are[M + 1], pq * aim[M + 1]};
    for (int p = M; p >= 0; --p) {
      const Complex r = ladder_rhs(p);
      auto solve_part = [&](const PowerSeries& g) {
        if (g.degree() < 0) return PowerSeries(cap);
        return solve_resonant({lambda, g, q}, ctx.params, phi, ctx.rule).y.with_cap(cap);
      };
      Y[p] = {solve_part(r.re) + pq * are[p], solve_part(r.im) + pq * aim[p]};
    }
  }

  for (int m = 0; m <= M + 1; ++m) {
    out.y.add({m, L, Parity::Cos}, Y[m].re);
    out.y.add({m, L, Parity::Sin}, -Y[m].im);
  }
  return out;
}

TrigPoly solve_wave(const TrigPoly& rhs, const PerturbationContext& ctx, int order, std::vector<CaseRecord>* log) {
  std::vector<std::pair<TrigKey, const PowerSeries*>> items;
  for (const auto& [k, c] : rhs.terms()) items.emplace_back(k, &c);
  std::vector<ModeSolution> sols(items.size());
  std::vector<std::string> errors(items.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      sols[i] = solve_mode(items[i].first.M, items[i].first.L, items[i].first.parity, *items[i].second, ctx);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw NumericalError(e);
  TrigPoly y(ctx.omega, ctx.params.theta0, ctx.cap);
  for (auto& s : sols) {
    y += s.y;
    s.record.order = order;
    s.record.label = case_label(order, s.record.key.L, s.record.resonant);
    if (log) log->push_back(s.record);
  }
  return y;
}

double y20_closed_form(const ModelParams& params, const EigenPair& fundamental) {
  const QuadratureRule leg = make_jacobi_rule(0.0, std::max(64, params.quadrature_points));
  double s = 0.0;
  for (int i = 0; i < leg.size(); ++i) {
    const double d = fundamental.derivative(leg.nodes[i]);
    s += leg.weights[i] * d * d;
  }
  return (params.N - 1.0) / (2.0 * (params.N - 2.0)) * s;
}

PerturbationResult build_to_order(const ModelParams& params, std::optional<double> omega_override) {
  const PerturbationContext ctx = make_context(params, omega_override);
  PerturbationResult res;
  res.params = params;
  res.omega = ctx.omega;
  res.orders.push_back(build_y1(ctx));
  res.rhs.push_back(TrigPoly(ctx.omega, params.theta0, ctx.cap));
  for (int k = 2; k <= params.order; ++k) {
    TrigPoly rhs = assemble_rhs(res.orders, k, ctx);
    res.orders.push_back(solve_wave(rhs, ctx, k, &res.case_log));
    res.rhs.push_back(std::move(rhs));
    if (k == 3) {
      const PowerSeries* g1 = res.rhs[2].find({0, 1, Parity::Sin});
      const double proj = g1 ? inner_product(*g1, ctx.fundamental.phi, ctx.rule) : 0.0;
      res.c3 = -proj / (2.0 * ctx.omega);
      res.has_c3 = true;
    }
  }
  if (params.order >= 2) {
    const PowerSeries* y20 = res.orders[1].find({0, 0, Parity::Cos});
    res.y20_at_zero = y20 ? (*y20)(0.0) : 0.0;
  }
  res.y20_closed_form = y20_closed_form(params, ctx.fundamental);
  return res;
}

TrigPoly PerturbationResult::partial_sum(double eps) const {
  TrigPoly y = orders.front() * 0.0;
  double e = 1.0;
  for (const auto& yk : orders) {
    e *= eps;
    y += yk * e;
  }
  return y;
}

double PerturbationResult::period() const { return 2.0 * std::numbers::pi / omega; }

double residual(const PerturbationResult& result, double eps, const std::vector<double>& t_samples,
                const QuadratureRule& rule) {
  const double h = result.params.half_dim();
  const double gamma = result.params.gamma();
  const TrigPoly y = result.partial_sum(eps);
  const TrigPoly ytt = y.d_t().d_t();
  double worst = 0.0;
  for (double t : t_samples) {
    const PowerSeries Y = y.at(t);
    const PowerSeries A = ytt.at(t);
    const PowerSeries lapY = Y.laplace(h);
    const PowerSeries v = -Y.d();
    GridFunction r(rule.nodes.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double z = rule.nodes[i];
      const double vz = v(z);
      const double lz = lapY(z);
      r[i] = A(z) - lz - gas_GI(gamma, vz) * lz - gas_GII(gamma, h, vz);
    }
    worst = std::max(worst, norm(r, rule));
  }
  return worst;
}

double order_defect(const PerturbationResult& result, int k, const std::vector<double>& t_samples,
                    const QuadratureRule& rule) {
  if (k < 1 || k > static_cast<int>(result.orders.size())) throw ValidationError("order out of range");
  const double h = result.params.half_dim();
  const TrigPoly& yk = result.orders[k - 1];
  const TrigPoly lhs = yk.d_t().d_t() + yk.laplace(h) * -1.0;
  double worst = 0.0;
  for (double t : t_samples) {
    const PowerSeries f = result.rhs[k - 1].at(t);
    const double scale = std::max(norm(f, rule), 1e-300);
    const double d = norm(lhs.at(t) - f, rule);
    worst = std::max(worst, k == 1 ? d : d / scale);
  }
  return worst;
}

double time_average_at_boundary(const PerturbationResult& result, double eps, double T) {
  if (!(T > 0.0)) throw ValidationError("averaging window must be positive");
  const TrigPoly y = result.partial_sum(eps);
  const QuadratureRule leg = make_jacobi_rule(0.0, 64);
  double s = 0.0;
  for (int i = 0; i < leg.size(); ++i) s += leg.weights[i] * y.value(T * leg.nodes[i], 0.0);
  return s;
}

std::string to_json(const PerturbationResult& result) {
  using nlohmann::json;
  json j;
  j["N"] = result.params.N;
  j["gamma"] = result.params.gamma();
  j["n0"] = result.params.n0;
  j["theta0"] = result.params.theta0;
  j["K"] = result.params.order;
  j["omega"] = result.omega;
  j["working_degree"] = result.params.working_degree;
  json orders = json::array();
  for (std::size_t k = 0; k < result.orders.size(); ++k) {
    json terms = json::array();
    for (const auto& [key, c] : result.orders[k].terms()) {
      terms.push_back({{"M", key.M}, {"L", key.L}, {"parity", to_string(key.parity)}, {"coeffs", c.coeffs()}});
    }
    orders.push_back({{"k", k + 1}, {"terms", terms}});
  }
  j["orders"] = orders;
  json log = json::array();
  for (const auto& r : result.case_log) {
    log.push_back({{"order", r.order},
                   {"M", r.key.M},
                   {"L", r.key.L},
                   {"parity", to_string(r.key.parity)},
                   {"resonant", r.resonant},
                   {"q", r.q},
                   {"margin", r.margin},
                   {"projection", r.projection},
                   {"label", r.label}});
  }
  j["case_log"] = log;
  if (result.has_c3) j["c3"] = result.c3;
  j["y20_at_zero"] = result.y20_at_zero;
  j["y20_closed_form"] = result.y20_closed_form;
  return j.dump(2);
}

}  // namespace pvw
