#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace pvw {

/// Truncated power series sum_k a_k z^{k + o} with o in {0, 1/2}.
///
/// The half-power channel holds results of sqrt(z) d/dz exactly instead of
/// approximating them. All arithmetic truncates at `cap`, the shared working
/// degree; products of two operands use the smaller cap.
template <class T>
class Series {
 public:
  Series() = default;
  explicit Series(int cap, bool half = false) : cap_(cap), half_(half) { check_cap(); }
  Series(std::vector<T> coeffs, int cap, bool half = false)
      : c_(std::move(coeffs)), cap_(cap), half_(half) {
    check_cap();
    if (static_cast<int>(c_.size()) > cap_ + 1) c_.resize(static_cast<std::size_t>(cap_) + 1);
  }

  static Series monomial(int k, T a, int cap) {
    Series s(cap);
    if (k <= cap) s.set(k, a);
    return s;
  }
  static Series constant(T a, int cap) { return monomial(0, a, cap); }

  int cap() const { return cap_; }
  bool half() const { return half_; }
  int size() const { return static_cast<int>(c_.size()); }
  int degree() const {
    for (int k = size() - 1; k >= 0; --k)
      if (c_[k] != T(0)) return k;
    return -1;
  }
  const std::vector<T>& coeffs() const { return c_; }
  T operator[](int k) const { return (k >= 0 && k < size()) ? c_[k] : T(0); }

  void set(int k, T a) {
    if (k < 0 || k > cap_) throw std::out_of_range("series index beyond truncation degree");
    if (k >= size()) c_.resize(static_cast<std::size_t>(k) + 1, T(0));
    c_[k] = a;
  }

  Series with_cap(int cap) const { return Series(c_, cap, half_); }

  Series& operator+=(const Series& o) {
    if (size() == 0) {
      half_ = o.half_;
    } else if (o.size() > 0 && o.half_ != half_) {
      throw std::invalid_argument("cannot add integer-power and half-power series");
    }
    cap_ = std::min(cap_, o.cap_);
    const int n = std::min(cap_ + 1, std::max(size(), o.size()));
    c_.resize(static_cast<std::size_t>(n), T(0));
    for (int k = 0; k < n; ++k) c_[k] += o[k];
    return *this;
  }
  Series& operator-=(const Series& o) { return *this += o * T(-1); }
  Series& operator*=(const T& a) {
    for (auto& x : c_) x *= a;
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const T& s) { return a *= s; }
  friend Series operator*(const T& s, Series a) { return a *= s; }
  friend Series operator-(Series a) { return a *= T(-1); }

  friend Series operator*(const Series& a, const Series& b) {
    const int cap = std::min(a.cap_, b.cap_);
    const bool carry = a.half_ && b.half_;
    const bool half = a.half_ != b.half_;
    Series out(cap, half);
    if (a.size() == 0 || b.size() == 0) return out;
    const int shift = carry ? 1 : 0;
    const int top = std::min(cap, a.size() - 1 + b.size() - 1 + shift);
    if (top < 0) return out;
    out.c_.assign(static_cast<std::size_t>(top) + 1, T(0));
    for (int i = 0; i < a.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (int j = 0; j < b.size() && i + j + shift <= top; ++j) out.c_[i + j + shift] += a.c_[i] * b.c_[j];
    }
    return out;
  }

  /// Exponent of the k-th coefficient, k + o.
  T exponent(int k) const { return half_ ? T(2 * k + 1) / T(2) : T(k); }

  /// d/dz; defined on the integer channel only (no negative powers arise).
  Series d() const {
    require_integer("d/dz");
    Series out(cap_);
    for (int k = 1; k < size(); ++k) out.set(k - 1, T(k) * c_[k]);
    return out;
  }

  /// z d/dz, which keeps every exponent.
  Series check_d() const {
    Series out(cap_, half_);
    for (int k = 0; k < size(); ++k)
      if (c_[k] != T(0)) out.set(k, exponent(k) * c_[k]);
    return out;
  }

  /// sqrt(z) d/dz; flips the half-power channel.
  Series dot_d() const {
    Series out(cap_, !half_);
    if (half_) {
      for (int k = 0; k < size(); ++k)
        if (c_[k] != T(0)) out.set(k, exponent(k) * c_[k]);
    } else {
      for (int k = 1; k < size(); ++k)
        if (c_[k] != T(0)) out.set(k - 1, T(k) * c_[k]);
    }
    return out;
  }

  /// z d^2/dz^2 + h d/dz with h = N/2; out_k = (k+1)(k+h) a_{k+1}.
  Series laplace(const T& h) const {
    require_integer("laplace");
    Series out(cap_);
    for (int k = 0; k + 1 < size(); ++k) out.set(k, T(k + 1) * (T(k) + h) * c_[k + 1]);
    return out;
  }

  /// z^{-s} int_0^z y(w) w^{s-1} dw, termwise a_p z^p -> a_p / (p + s) z^p.
  Series hardy(const T& s) const {
    Series out(cap_, half_);
    for (int k = 0; k < size(); ++k)
      if (c_[k] != T(0)) out.set(k, c_[k] / (exponent(k) + s));
    return out;
  }

  /// int_0^z y(w) dw on the integer channel.
  Series integral() const {
    require_integer("integral");
    Series out(cap_);
    for (int k = 0; k < size() && k + 1 <= cap_; ++k)
      if (c_[k] != T(0)) out.set(k + 1, c_[k] / T(k + 1));
    return out;
  }

  /// Multiplication by z.
  Series times_z() const {
    Series out(cap_, half_);
    for (int k = 0; k < size() && k + 1 <= cap_; ++k)
      if (c_[k] != T(0)) out.set(k + 1, c_[k]);
    return out;
  }

  /// Value at z in [0, 1] (Horner); the half channel contributes sqrt(z).
  T operator()(const T& z) const {
    using Acc = std::conditional_t<std::is_same_v<T, double>, long double, T>;
    Acc acc(0);
    for (int k = size() - 1; k >= 0; --k) acc = acc * Acc(z) + Acc(c_[k]);
    if (half_) {
      if constexpr (std::is_floating_point_v<T>) {
        acc *= std::sqrt(static_cast<Acc>(z));
      } else {
        throw std::logic_error("half-power evaluation requires a floating type");
      }
    }
    return T(acc);
  }

  /// Sum of coefficients, i.e. the value at z = 1.
  T at_one() const {
    using Acc = std::conditional_t<std::is_same_v<T, double>, long double, T>;
    Acc acc(0);
    for (const auto& x : c_) acc += Acc(x);
    return T(acc);
  }

 private:
  void check_cap() const {
    if (cap_ < 0) throw std::invalid_argument("series truncation degree must be nonnegative");
  }
  void require_integer(const char* what) const {
    if (half_) throw std::invalid_argument(std::string(what) + " is not defined on the half-power channel");
  }

  std::vector<T> c_;
  int cap_ = 0;
  bool half_ = false;
};

using PowerSeries = Series<double>;

/// Largest coefficientwise |a_k - b_k| (both must share a channel).
template <class T>
T max_coeff_defect(const Series<T>& a, const Series<T>& b) {
  if (a.half() != b.half() && a.degree() >= 0 && b.degree() >= 0)
    throw std::invalid_argument("defect between series on different channels");
  T worst(0);
  const int n = std::max(a.size(), b.size());
  for (int k = 0; k < n; ++k) {
    T d = a[k] - b[k];
    if (d < T(0)) d = -d;
    if (d > worst) worst = d;
  }
  return worst;
}

template <class T>
T max_abs_coeff(const Series<T>& a) {
  T worst(0);
  for (const auto& x : a.coeffs()) {
    const T m = x < T(0) ? T(-x) : x;
    if (m > worst) worst = m;
  }
  return worst;
}

/// The gas-law nonlinearity G(v) = (1 - (1+v)^{-gamma}) / gamma and the
/// coefficient functions built from it, as Taylor coefficients in v.
struct NonlinearitySeries {
  double gamma = 2.0;
  double half_dim = 2.0;
  std::vector<double> g;    // G_l, l >= 1
  std::vector<double> dg;   // (DG)_l, l >= 0
  std::vector<double> d2g;  // (D^2 G)_l, l >= 0
  std::vector<double> gI;   // (G_I)_l = (DG)_l for l >= 1, zero at l = 0
  std::vector<double> gII;  // (G_II)_l = (N/2)((DG)_{l-1} - G_l), l >= 2
  int order() const { return static_cast<int>(gI.size()) - 1; }
};

/// binom(a, l) for real a by the falling-product recurrence.
template <class T>
std::vector<T> binomial_row(const T& a, int order) {
  std::vector<T> b(static_cast<std::size_t>(order) + 1);
  b[0] = T(1);
  for (int l = 1; l <= order; ++l) b[l] = b[l - 1] * (a - T(l - 1)) / T(l);
  return b;
}

/// Taylor coefficients of G, DG, D^2 G, G_I, G_II up to `order` for
/// gamma = N/(N-2). Works with any field type T.
template <class T>
struct NonlinearityCoefficients {
  std::vector<T> g, dg, d2g, gI, gII;
};

template <class T>
NonlinearityCoefficients<T> nonlinearity_coefficients(const T& N, int order) {
  if (order < 2) throw std::invalid_argument("nonlinearity order must be >= 2");
  const T gamma = N / (N - T(2));
  const T h = N / T(2);
  NonlinearityCoefficients<T> out;
  const auto b0 = binomial_row(T(-gamma), order + 1);
  const auto b1 = binomial_row(T(-gamma - T(1)), order + 1);
  const auto b2 = binomial_row(T(-gamma - T(2)), order + 1);
  const auto n = static_cast<std::size_t>(order) + 1;
  out.g.assign(n, T(0));
  out.dg.assign(n, T(0));
  out.d2g.assign(n, T(0));
  out.gI.assign(n, T(0));
  out.gII.assign(n, T(0));
  for (int l = 0; l <= order; ++l) {
    out.g[l] = l == 0 ? T(0) : T(-b0[l]) / gamma;
    out.dg[l] = b1[l];
    out.d2g[l] = (-gamma - T(1)) * b2[l];
    out.gI[l] = l == 0 ? T(0) : b1[l];
    out.gII[l] = l < 2 ? T(0) : h * (b1[l - 1] - out.g[l]);
  }
  return out;
}

NonlinearitySeries build_nonlinearity(double N, int order);

/// Closed forms, valid for v > -1.
double gas_G(double gamma, double v);
double gas_DG(double gamma, double v);
double gas_D2G(double gamma, double v);
double gas_GI(double gamma, double v);
double gas_GII(double gamma, double half_dim, double v);

/// sup_{[0,1]} |v| sampled on a fine uniform grid plus endpoints.
double sup_abs_on_unit(const PowerSeries& v);

/// sum_{l} coeff[l] v^l truncated at v's cap. Throws NumericalError when
/// sup|v| on [0,1] reaches the validity radius 1.
PowerSeries compose(const std::vector<double>& coeff, const PowerSeries& v);

}  // namespace pvw
