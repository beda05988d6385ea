#pragma once
// Elements a(x) + b(x)*y of the quadratic extension y^2 = Q of the rational
// function field, with the sheet involution y -> -y.

#include <memory>
#include <vector>

#include "qdw/ratfunc.hpp"

namespace qdw {

// Shared context: the defining Q plus the known irreducible blocks of its
// numerator/denominator, used for cheap cancellation in exact mode.
template <class F>
struct QContext {
  RatFunc<F> Q;
  std::vector<Poly<F>> factors;  // e.g. numerator P and the (x - z_j)

  explicit QContext(RatFunc<F> q, std::vector<Poly<F>> f = {})
      : Q(std::move(q)), factors(std::move(f)) {}
};

template <class F>
struct QextElem {
  RatFunc<F> a, b;  // a + b*y
  std::shared_ptr<const QContext<F>> ctx;

  QextElem() = default;
  QextElem(RatFunc<F> a_, RatFunc<F> b_, std::shared_ptr<const QContext<F>> c)
      : a(std::move(a_)), b(std::move(b_)), ctx(std::move(c)) {
    reduce();
  }
  static QextElem even(RatFunc<F> f, std::shared_ptr<const QContext<F>> c) {
    return QextElem(std::move(f), RatFunc<F>(), std::move(c));
  }
  static QextElem odd(RatFunc<F> f, std::shared_ptr<const QContext<F>> c) {
    return QextElem(RatFunc<F>(), std::move(f), std::move(c));
  }
  // v itself: a = 0, b = 1
  static QextElem v(std::shared_ptr<const QContext<F>> c) {
    return odd(RatFunc<F>::one(), std::move(c));
  }

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool pure_odd() const { return a.is_zero(); }
  bool pure_even() const { return b.is_zero(); }

  void reduce() {
    if (!ctx) return;
    for (const auto& f : ctx->factors) {
      a.reduce_by(f);
      b.reduce_by(f);
    }
  }

  static void check_ctx(const QextElem& x, const QextElem& y) {
    if (x.ctx != y.ctx) throw std::domain_error("QextElem: mismatched defining Q");
  }

  friend QextElem operator+(const QextElem& x, const QextElem& y) {
    check_ctx(x, y);
    return QextElem(x.a + y.a, x.b + y.b, x.ctx);
  }
  friend QextElem operator-(const QextElem& x, const QextElem& y) {
    check_ctx(x, y);
    return QextElem(x.a - y.a, x.b - y.b, x.ctx);
  }
  friend QextElem operator-(const QextElem& x) { return QextElem(-x.a, -x.b, x.ctx); }
  friend QextElem operator*(const QextElem& x, const QextElem& y) {
    check_ctx(x, y);
    const RatFunc<F>& Q = x.ctx->Q;
    return QextElem(x.a * y.a + x.b * y.b * Q, x.a * y.b + x.b * y.a, x.ctx);
  }
  friend QextElem operator*(const F& s, const QextElem& x) {
    return QextElem(s * x.a, s * x.b, x.ctx);
  }
  friend QextElem operator*(const RatFunc<F>& f, const QextElem& x) {
    return QextElem(f * x.a, f * x.b, x.ctx);
  }
  friend bool operator==(const QextElem& x, const QextElem& y) {
    return x.a == y.a && x.b == y.b;
  }

  // y -> -y
  QextElem involution() const { return QextElem(a, -b, ctx); }

  // d/dx, using y' = (Q'/(2Q)) y
  QextElem derivative() const {
    const RatFunc<F>& Q = ctx->Q;
    F half = FieldTraits<F>::from_int(1) / FieldTraits<F>::from_int(2);
    RatFunc<F> dlog = half * (Q.derivative() / Q);
    return QextElem(a.derivative(), b.derivative() + b * dlog, ctx);
  }

  // multiply by y/Q (division by v)
  QextElem div_by_v() const {
    const RatFunc<F>& Q = ctx->Q;
    return QextElem(b, a / Q, ctx);
  }
  // multiply by y
  QextElem times_v() const {
    const RatFunc<F>& Q = ctx->Q;
    return QextElem(b * Q, a, ctx);
  }

  // Evaluate at x given a value of y on the chosen sheet (float consumers).
  Cplx eval_c(const Cplx& x, const Cplx& yval) const {
    return a.eval_c(x) + b.eval_c(x) * yval;
  }
};

}  // namespace qdw
