#include "pvw/series.hpp"

#include <cmath>
#include <string>

#include "pvw/errors.hpp"

namespace pvw {

NonlinearitySeries build_nonlinearity(double N, int order) {
  if (!(N > 2.0)) throw ValidationError("nonlinearity requires N > 2");
  const auto c = nonlinearity_coefficients<double>(N, order);
  NonlinearitySeries out;
  out.gamma = N / (N - 2.0);
  out.half_dim = N / 2.0;
  out.g = c.g;
  out.dg = c.dg;
  out.d2g = c.d2g;
  out.gI = c.gI;
  out.gII = c.gII;
  return out;
}

namespace {
void require_admissible(double v) {
  if (!(v > -1.0)) throw NumericalError("gas law evaluated at 1 + v <= 0 (v = " + std::to_string(v) + ")");
}
}  // namespace

double gas_G(double gamma, double v) {
  require_admissible(v);
  return -std::expm1(-gamma * std::log1p(v)) / gamma;
}

double gas_DG(double gamma, double v) {
  require_admissible(v);
  return std::exp(-(gamma + 1.0) * std::log1p(v));
}

double gas_D2G(double gamma, double v) {
  require_admissible(v);
  return -(gamma + 1.0) * std::exp(-(gamma + 2.0) * std::log1p(v));
}

double gas_GI(double gamma, double v) {
  require_admissible(v);
  return std::expm1(-(gamma + 1.0) * std::log1p(v));
}

double gas_GII(double gamma, double half_dim, double v) {
  // v DG - G written to avoid cancelling O(1) terms for small v.
  require_admissible(v);
  const double l = std::log1p(v);
  const double a = std::expm1(-(gamma + 1.0) * l);  // DG - 1
  const double b = std::expm1(-gamma * l);          // -(gamma G)
  return half_dim * (v * a + v + b / gamma);
}

double sup_abs_on_unit(const PowerSeries& v) {
  double worst = 0.0;
  constexpr int samples = 512;
  for (int i = 0; i <= samples; ++i) worst = std::max(worst, std::abs(v(static_cast<double>(i) / samples)));
  return worst;
}

PowerSeries compose(const std::vector<double>& coeff, const PowerSeries& v) {
  if (v.half()) throw std::invalid_argument("compose expects an integer-power series");
  const double sup = sup_abs_on_unit(v);
  if (!(sup < 1.0)) {
    throw NumericalError("composition outside the validity radius: sup|v| = " + std::to_string(sup));
  }
  PowerSeries out(v.cap());
  PowerSeries power = PowerSeries::constant(1.0, v.cap());
  for (std::size_t l = 0; l < coeff.size(); ++l) {
    if (l > 0) power = power * v;
    if (coeff[l] != 0.0) out += power * coeff[l];
  }
  return out;
}

}  // namespace pvw
