#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pvw/series.hpp"
#include "pvw/weighted_space.hpp"

namespace pvw {

enum class Parity { Cos, Sin };

std::string to_string(Parity p);

struct TrigKey {
  int M = 0;  // power of t
  int L = 0;  // multiple of the phase Theta = omega t + theta0
  Parity parity = Parity::Cos;
  auto operator<=>(const TrigKey&) const = default;
};

/// Finite sum of t^M {cos, sin}(L Theta) c(z) with Theta = omega t + theta0.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(double omega, double theta0, int cap) : omega_(omega), theta0_(theta0), cap_(cap) {}

  double omega() const { return omega_; }
  double theta0() const { return theta0_; }
  int cap() const { return cap_; }
  const std::map<TrigKey, PowerSeries>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds c to the term at `key`; sin(0) keys are dropped, zero series pruned.
  void add(TrigKey key, const PowerSeries& c);
  const PowerSeries* find(TrigKey key) const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator*=(double s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(TrigPoly a, double s) { return a *= s; }
  friend TrigPoly operator*(double s, TrigPoly a) { return a *= s; }

  /// Product reduced with the product-to-sum rules.
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);

  TrigPoly d_t() const;
  TrigPoly d_z() const;
  TrigPoly laplace(double half_dim) const;
  TrigPoly map(const std::function<PowerSeries(const PowerSeries&)>& f) const;

  PowerSeries at(double t) const;
  double value(double t, double z) const;
  int max_M() const;
  int max_L() const;

 private:
  void check_compatible(const TrigPoly& o) const;
  double omega_ = 1.0;
  double theta0_ = 0.0;
  int cap_ = 0;
  std::map<TrigKey, PowerSeries> terms_;
};

/// sum_l coeff[l] v^l with TrigPoly products.
TrigPoly compose(const std::vector<double>& coeff, const TrigPoly& v);

/// (-d_t^2)^j (-lap)^k y as a graded-norm field.
GradedField graded_field(const TrigPoly& y, double half_dim);

}  // namespace pvw
