#pragma once
// Rational functions num/den with monic denominator; coprime in exact mode.

#include <algorithm>

#include "qdw/poly.hpp"

namespace qdw {

template <class F>
struct RatFunc {
  Poly<F> num, den;

  RatFunc() : num(), den(Poly<F>::one()) {}
  RatFunc(Poly<F> n, Poly<F> d) : num(std::move(n)), den(std::move(d)) { normalize(); }
  static RatFunc from_poly(Poly<F> p) { return RatFunc(std::move(p), Poly<F>::one()); }
  static RatFunc constant(const F& a) { return from_poly(Poly<F>::constant(a)); }
  static RatFunc one() { return from_poly(Poly<F>::one()); }
  static RatFunc x() {
    return from_poly(Poly<F>(std::vector<F>{F{}, FieldTraits<F>::from_int(1)}));
  }

  bool is_zero() const { return num.is_zero(); }

  // Full Euclid gcd is skipped above this degree: callers working with large
  // structured denominators cancel known factors via reduce_by() instead
  // (Euclid's remainder-sequence coefficient growth is prohibitive there).
  static constexpr int kGcdDegreeCap = 64;

  void normalize() {
    if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num.is_zero()) {
      den = Poly<F>::one();
      return;
    }
    if constexpr (FieldTraits<F>::exact) {
      if (std::min(num.degree(), den.degree()) <= kGcdDegreeCap) {
        Poly<F> g = poly_gcd(num, den);
        if (g.degree() > 0) {
          num = Poly<F>::div_exact(num, g);
          den = Poly<F>::div_exact(den, g);
        }
      }
    }
    F inv = FieldTraits<F>::from_int(1) / den.lead();
    num = inv * num;
    den = inv * den;
  }

  // Cancel every copy of a known common factor f from num and den (exact mode).
  void reduce_by(const Poly<F>& f) {
    if constexpr (FieldTraits<F>::exact) {
      if (f.degree() < 1) return;
      while (num.degree() >= f.degree() && den.degree() >= f.degree()) {
        auto [qn, rn] = Poly<F>::divmod(num, f);
        if (!rn.is_zero()) break;
        auto [qd, rd] = Poly<F>::divmod(den, f);
        if (!rd.is_zero()) break;
        num = std::move(qn);
        den = std::move(qd);
      }
      normalize();
    }
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num, a.den); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num * b.num, a.den * b.den);
  }
  friend RatFunc operator*(const F& s, const RatFunc& a) { return RatFunc(s * a.num, a.den); }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return (a.num * b.den - b.num * a.den).is_zero();
  }

  RatFunc derivative() const {
    return RatFunc(num.derivative() * den - num * den.derivative(), den * den);
  }

  F eval(const F& x) const { return num.eval(x) / den.eval(x); }
  Cplx eval_c(const Cplx& x) const { return num.eval_c(x) / den.eval_c(x); }

  RatFunc<Cplx> to_cplx() const { return RatFunc<Cplx>(num.to_cplx(), den.to_cplx()); }
};

}  // namespace qdw
