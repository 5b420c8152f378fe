#include "pvw/special_functions.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pvw/errors.hpp"

namespace pvw {

namespace {

std::atomic<double> g_gamma_corruption{1.0};

constexpr int kMaxSeriesTerms = 500;
// Below this argument Phi is summed directly; above it the series loses
// digits to cancellation and the backward recurrence takes over.
constexpr double kSeriesLimit = 1.0;

double lanczos_gamma(double x) {
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = p[0];
  for (std::size_t i = 1; i < p.size(); ++i) a += p[i] / (x + static_cast<double>(i));
  const double t = x + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

// Backward (Miller) recurrence for J_nu, J_{nu+1}, normalised with
// (x/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(x).
BesselPair miller(double nu, double x) {
  const double top = std::max(x, nu);
  const int kmax = static_cast<int>(std::ceil((top + std::sqrt(60.0 * top) + 30.0) / 2.0));
  const int imax = 2 * kmax;

  // u_k = Gamma(nu + k) / (k! Gamma(nu + 1))
  std::vector<double> u(static_cast<std::size_t>(kmax) + 1);
  u[0] = 1.0 / nu;
  for (int k = 1; k <= kmax; ++k) u[k] = u[k - 1] * (nu + k - 1.0) / k;

  double f_above = 0.0;
  double f = 1e-30;
  double sum = (nu + imax) * u[kmax] * f;
  double f_nu1 = 0.0;
  for (int i = imax; i > 0; --i) {
    // f holds order nu + i, f_above order nu + i + 1
    const double order = nu + i;
    const double f_below = (2.0 * order / x) * f - f_above;
    f_above = f;
    f = f_below;
    const int idx = i - 1;
    if (idx % 2 == 0) sum += (nu + idx) * u[idx / 2] * f;
    if (idx == 1) f_nu1 = f;
    if (idx == 0) f_nu1 = f_above;
    if (std::abs(f) > 1e200) {
      f *= 1e-200;
      f_above *= 1e-200;
      sum *= 1e-200;
      f_nu1 *= 1e-200;
    }
  }
  const double scale = std::pow(0.5 * x, nu) / (gamma_fn(nu + 1.0) * sum);
  return {f * scale, f_nu1 * scale};
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  if (!std::isfinite(nu) || nu < 0.5) {
    throw std::domain_error("Bessel order must be finite and >= 1/2 (got " + std::to_string(nu) + ")");
  }
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("gamma_fn requires finite x > 0");
  return lanczos_gamma(x) * g_gamma_corruption.load(std::memory_order_relaxed);
}

double phi_series(Order nu, double X) {
  if (!std::isfinite(X)) throw std::domain_error("phi_series requires finite X");
  const double v = nu.value();
  double term = 1.0 / gamma_fn(v + 1.0);
  double sum = term;
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    term *= -X / (k * (v + k));
    sum += term;
    if (!std::isfinite(sum)) {
      throw NumericalError("phi_series overflow at X = " + std::to_string(X));
    }
    if (std::abs(term) < 1e-16 * std::abs(sum) && k > std::abs(X)) return sum;
    if (term == 0.0) return sum;
  }
  throw NumericalError("phi_series did not converge within 500 terms at X = " + std::to_string(X));
}

PhiPair eval_phi_pair(Order nu, double X) {
  if (!std::isfinite(X)) throw std::domain_error("eval_phi requires finite X");
  if (X <= kSeriesLimit) return {phi_series(nu, X), phi_series(nu.shifted(1.0), X)};
  const double r = 2.0 * std::sqrt(X);
  const BesselPair jp = miller(nu.value(), r);
  const double half_r = 0.5 * r;
  const double scale = std::pow(half_r, -nu.value());
  return {jp.j * scale, jp.j_next * scale / half_r};
}

double eval_phi(Order nu, double X) {
  if (!std::isfinite(X)) throw std::domain_error("eval_phi requires finite X");
  if (X <= kSeriesLimit) return phi_series(nu, X);
  return eval_phi_pair(nu, X).phi;
}

BesselPair bessel_j_pair(Order nu, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("Bessel J requires finite r > 0");
  const double X = 0.25 * r * r;
  if (X <= kSeriesLimit) {
    const double h = std::pow(0.5 * r, nu.value());
    return {h * phi_series(nu, X), h * 0.5 * r * phi_series(nu.shifted(1.0), X)};
  }
  return miller(nu.value(), r);
}

double eval_bessel_j(Order nu, double r) { return bessel_j_pair(nu, r).j; }

double eval_bessel_j_derivative(Order nu, double r) {
  const BesselPair p = bessel_j_pair(nu, r);
  return nu.value() / r * p.j - p.j_next;
}

namespace {

struct ZeroRefiner {
  Order nu;

  double value(double r) const { return eval_bessel_j(nu, r); }

  // Bisection to width 1e-6 followed by safeguarded Newton polish.
  double refine(double lo, double hi, double f_lo) const {
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = value(mid);
      if (f_mid == 0.0) return mid;
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 30; ++it) {
      const BesselPair p = bessel_j_pair(nu, r);
      const double deriv = nu.value() / r * p.j - p.j_next;
      if (deriv == 0.0) break;
      const double step = p.j / deriv;
      double next = r - step;
      if (next < lo || next > hi) next = 0.5 * (lo + hi);
      if ((p.j > 0.0) == (f_lo > 0.0)) {
        lo = std::max(lo, r);
      } else {
        hi = std::min(hi, r);
      }
      const double moved = std::abs(next - r);
      r = next;
      if (moved <= 1e-15 * std::max(1.0, r)) break;
    }
    return r;
  }

  // Sign-change scan on [from, limit] with step `h`.
  bool scan(double from, double limit, double h, double& lo, double& hi, double& f_lo) const {
    double a = from;
    double fa = value(a);
    while (a < limit) {
      const double b = std::min(a + h, limit);
      const double fb = value(b);
      if (fa == 0.0) {
        lo = a;
        hi = a;
        f_lo = fa;
        return true;
      }
      if ((fa > 0.0) != (fb > 0.0)) {
        lo = a;
        hi = b;
        f_lo = fa;
        return true;
      }
      a = b;
      fa = fb;
    }
    return false;
  }
};

double mcmahon_seed(double nu, int n, int offset) {
  const double base = (offset + n + nu / 2.0 + 0.75) * std::numbers::pi;
  return base - (4.0 * nu * nu - 1.0) / (8.0 * base);
}

}  // namespace

std::vector<double> bessel_zeros(Order nu, int count) {
  if (count < 1) throw std::domain_error("bessel_zeros requires count >= 1");
  const double v = nu.value();
  const double pi = std::numbers::pi;
  const ZeroRefiner refiner{nu};
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));

  // First zero: J_nu > 0 on (0, nu], and consecutive zeros are at least pi
  // apart for nu >= 1/2, so a pi/4 scan cannot step over a root.
  double lo = 0.0, hi = 0.0, f_lo = 0.0;
  const double start = std::max(v, 1e-3);
  if (!refiner.scan(start, start + 4.0 * pi + 4.0 * std::cbrt(v) + 10.0, pi / 4.0, lo, hi, f_lo)) {
    throw NumericalError("failed to bracket the first zero of J_nu for nu = " + std::to_string(v));
  }
  zeros.push_back(lo == hi ? lo : refiner.refine(lo, hi, f_lo));
  const int offset = static_cast<int>(std::lround(zeros[0] / pi - 1.0 - v / 2.0 - 0.75));

  double gap = std::max(zeros[0], pi);
  for (int n = 2; n <= count; ++n) {
    const double prev = zeros.back();
    const double window_lo = prev + 0.9 * pi;
    const double window_hi = prev + 1.1 * std::max(gap, pi) + 1e-9;
    const double seed = mcmahon_seed(v, n, offset);
    double b_lo = std::max(window_lo, seed - pi / 2.0);
    double b_hi = std::min(window_hi, seed + pi / 2.0);
    bool found = false;
    if (b_lo < b_hi) {
      const double fa = refiner.value(b_lo);
      const double fb = refiner.value(b_hi);
      if ((fa > 0.0) != (fb > 0.0)) {
        lo = b_lo;
        hi = b_hi;
        f_lo = fa;
        found = true;
      }
    }
    if (!found) found = refiner.scan(window_lo, window_hi, pi / 8.0, lo, hi, f_lo);
    if (!found) {
      throw NumericalError("failed to bracket zero " + std::to_string(n) + " of J_nu for nu = " +
                           std::to_string(v));
    }
    const double z = lo == hi ? lo : refiner.refine(lo, hi, f_lo);
    if (!(z > prev)) {
      throw NumericalError("zero ordering violated at n = " + std::to_string(n));
    }
    gap = z - prev;
    zeros.push_back(z);
  }
  return zeros;
}

double bessel_zero(Order nu, int n) {
  if (n < 1) throw std::domain_error("bessel_zero requires n >= 1");
  return bessel_zeros(nu, n).back();
}

int asymptotic_offset(Order nu) {
  const double first = bessel_zero(nu, 1);
  return static_cast<int>(std::lround(first / std::numbers::pi - 1.0 - nu.value() / 2.0 - 0.75));
}

double asymptotic_zero(Order nu, int n) {
  return (asymptotic_offset(nu) + n + nu.value() / 2.0 + 0.75) * std::numbers::pi;
}

double eigenvalue(const ModelParams& params, int n) {
  const double j = bessel_zero(Order(params.nu()), n);
  return 0.25 * j * j;
}

std::vector<double> eigenvalues(const ModelParams& params, int count) {
  std::vector<double> out = bessel_zeros(Order(params.nu()), count);
  for (double& j : out) j = 0.25 * j * j;
  return out;
}

namespace testing {
void set_gamma_corruption(double factor) { g_gamma_corruption.store(factor); }
double gamma_corruption() { return g_gamma_corruption.load(); }
}  // namespace testing

}  // namespace pvw
