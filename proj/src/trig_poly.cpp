#include "pvw/trig_poly.hpp"

#include <cmath>
#include <stdexcept>

namespace pvw {

std::string to_string(Parity p) { return p == Parity::Cos ? "cos" : "sin"; }

void TrigPoly::add(TrigKey key, const PowerSeries& c) {
  if (key.L < 0) {
    key.L = -key.L;
    if (key.parity == Parity::Sin) {
      add(key, -c);
      return;
    }
  }
  if (key.L == 0 && key.parity == Parity::Sin) return;
  if (c.degree() < 0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c.with_cap(std::min(c.cap(), cap_)));
  } else {
    it->second += c;
    if (it->second.degree() < 0) terms_.erase(it);
  }
}

const PowerSeries* TrigPoly::find(TrigKey key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? nullptr : &it->second;
}

void TrigPoly::check_compatible(const TrigPoly& o) const {
  if (o.terms_.empty() || terms_.empty()) return;
  if (o.omega_ != omega_ || o.theta0_ != theta0_) {
    throw std::invalid_argument("trigonometric polynomials with different phases cannot be combined");
  }
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  check_compatible(o);
  if (terms_.empty()) {
    omega_ = o.omega_;
    theta0_ = o.theta0_;
  }
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  a.check_compatible(b);
  const TrigPoly& ref = a.terms_.empty() ? b : a;
  TrigPoly out(ref.omega_, ref.theta0_, std::min(a.cap_, b.cap_));
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      const PowerSeries half = (ca * cb) * 0.5;
      const int M = ka.M + kb.M;
      const int lo = ka.L - kb.L;
      const int hi = ka.L + kb.L;
      if (ka.parity == Parity::Cos && kb.parity == Parity::Cos) {
        out.add({M, lo, Parity::Cos}, half);
        out.add({M, hi, Parity::Cos}, half);
      } else if (ka.parity == Parity::Sin && kb.parity == Parity::Sin) {
        out.add({M, lo, Parity::Cos}, half);
        out.add({M, hi, Parity::Cos}, -half);
      } else if (ka.parity == Parity::Sin) {
        out.add({M, hi, Parity::Sin}, half);
        out.add({M, lo, Parity::Sin}, half);
      } else {
        out.add({M, hi, Parity::Sin}, half);
        out.add({M, lo, Parity::Sin}, -half);
      }
    }
  }
  return out;
}

TrigPoly TrigPoly::d_t() const {
  TrigPoly out(omega_, theta0_, cap_);
  for (const auto& [k, c] : terms_) {
    if (k.M > 0) out.add({k.M - 1, k.L, k.parity}, c * static_cast<double>(k.M));
    if (k.L > 0) {
      const double w = k.L * omega_;
      if (k.parity == Parity::Cos) {
        out.add({k.M, k.L, Parity::Sin}, c * (-w));
      } else {
        out.add({k.M, k.L, Parity::Cos}, c * w);
      }
    }
  }
  return out;
}

TrigPoly TrigPoly::map(const std::function<PowerSeries(const PowerSeries&)>& f) const {
  TrigPoly out(omega_, theta0_, cap_);
  for (const auto& [k, c] : terms_) out.add(k, f(c));
  return out;
}

TrigPoly TrigPoly::d_z() const {
  return map([](const PowerSeries& c) { return c.d(); });
}

TrigPoly TrigPoly::laplace(double half_dim) const {
  return map([half_dim](const PowerSeries& c) { return c.laplace(half_dim); });
}

PowerSeries TrigPoly::at(double t) const {
  PowerSeries out(cap_);
  const double theta = omega_ * t + theta0_;
  for (const auto& [k, c] : terms_) {
    const double trig = k.parity == Parity::Cos ? std::cos(k.L * theta) : std::sin(k.L * theta);
    out += c * (std::pow(t, k.M) * trig);
  }
  return out;
}

double TrigPoly::value(double t, double z) const {
  const double theta = omega_ * t + theta0_;
  long double acc = 0.0L;
  for (const auto& [k, c] : terms_) {
    const double trig = k.parity == Parity::Cos ? std::cos(k.L * theta) : std::sin(k.L * theta);
    acc += static_cast<long double>(std::pow(t, k.M) * trig) * c(z);
  }
  return static_cast<double>(acc);
}

int TrigPoly::max_M() const {
  int m = -1;
  for (const auto& [k, c] : terms_) m = std::max(m, k.M);
  return m;
}

int TrigPoly::max_L() const {
  int m = -1;
  for (const auto& [k, c] : terms_) m = std::max(m, k.L);
  return m;
}

TrigPoly compose(const std::vector<double>& coeff, const TrigPoly& v) {
  TrigPoly out(v.omega(), v.theta0(), v.cap());
  TrigPoly power(v.omega(), v.theta0(), v.cap());
  power.add({0, 0, Parity::Cos}, PowerSeries::constant(1.0, v.cap()));
  for (std::size_t l = 0; l < coeff.size(); ++l) {
    if (l > 0) power = power * v;
    if (coeff[l] != 0.0) out += power * coeff[l];
  }
  return out;
}

GradedField graded_field(const TrigPoly& y, double half_dim) {
  return [y, half_dim](int j, int k, double t) {
    TrigPoly u = y;
    for (int i = 0; i < 2 * j; ++i) u = u.d_t();
    for (int i = 0; i < k; ++i) u = u.laplace(half_dim);
    return u.at(t) * (((j + k) % 2) ? -1.0 : 1.0);
  };
}

}  // namespace pvw
