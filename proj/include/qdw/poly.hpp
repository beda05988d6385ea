#pragma once
// Dense univariate polynomials over a coefficient field.

#include <cstdint>
#include <vector>
#include <stdexcept>
#include <utility>
#include "qdw/field.hpp"

namespace qdw {

template <class F>
struct Poly {
  // coefficients, ascending degree; empty vector = zero polynomial (degree -1)
  std::vector<F> c;

  Poly() = default;
  explicit Poly(std::vector<F> coeffs) : c(std::move(coeffs)) { normalize(); }
  static Poly constant(const F& a) { return Poly(std::vector<F>{a}); }
  static Poly one() { return constant(FieldTraits<F>::from_int(1)); }
  // x - a
  static Poly linear(const F& a) { return Poly(std::vector<F>{-a + F{}, FieldTraits<F>::from_int(1)}); }

  void normalize() {
    while (!c.empty() && FieldTraits<F>::is_zero(c.back())) c.pop_back();
  }
  int degree() const { return int(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  const F& coeff(int k) const {
    static const F zero{};
    return (k >= 0 && k < int(c.size())) ? c[size_t(k)] : zero;
  }
  F lead() const {
    if (is_zero()) throw std::domain_error("Poly: leading coeff of zero");
    return c.back();
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c.size(), b.c.size()), F{});
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c.size(), b.c.size()), F{});
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<F> r = a.c;
    for (auto& x : r) x = -x;
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c.size() + b.c.size() - 1, F{});
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const F& s, const Poly& a) {
    std::vector<F> r = a.c;
    for (auto& x : r) x = s * x;
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    Poly d = a - b;
    return d.is_zero();
  }

  Poly derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<F> r(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r[i - 1] = FieldTraits<F>::from_int(long(i)) * c[i];
    return Poly(std::move(r));
  }

  F eval(const F& x) const {
    F r{};
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }
  Cplx eval_c(const Cplx& x) const {
    Cplx r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * x + FieldTraits<F>::to_cplx(c[i]);
    return r;
  }

  // quotient and remainder, deg(rem) < deg(b)
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    Poly rem = a;
    int db = b.degree();
    F lb = b.lead();
    if (rem.degree() < db) return {Poly(), rem};
    std::vector<F> q(size_t(rem.degree() - db + 1), F{});
    while (rem.degree() >= db) {
      int k = rem.degree() - db;
      F f = rem.lead() / lb;
      q[size_t(k)] = f;
      for (int i = 0; i <= db; ++i) rem.c[size_t(k + i)] -= f * b.c[size_t(i)];
      rem.normalize();
    }
    return {Poly(std::move(q)), rem};
  }

  // exact division; throws if remainder nonzero (exact fields only)
  static Poly div_exact(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::domain_error("Poly: inexact division");
    return q;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    F inv = FieldTraits<F>::from_int(1) / lead();
    return inv * *this;
  }

  // Taylor coefficients of p(x0 + u) in u (in-place repeated Horner).
  std::vector<F> shifted(const F& x0) const {
    std::vector<F> w = c;
    size_t n = w.size();
    for (size_t j = 0; j < n; ++j)
      for (size_t i = n - 1; i-- > j;) w[i] += x0 * w[i + 1];
    return w;
  }

  Poly<Cplx> to_cplx() const {
    std::vector<Cplx> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = FieldTraits<F>::to_cplx(c[i]);
    return Poly<Cplx>(std::move(r));
  }
};

// Euclidean gcd, monic result; exact fields only.
template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  static_assert(FieldTraits<F>::exact, "poly_gcd needs exact coefficients");
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    auto [q, r] = Poly<F>::divmod(a, b);
    (void)q;
    a = std::move(b);
    b = r.is_zero() ? r : r.monic();
  }
  return a;
}

namespace detail {

// Image of the polynomial in F_p with i mapped to a square root of -1.
// Returns false (bad prime for this input) if a denominator or the leading
// coefficient vanishes mod p.
struct ModP {
  static constexpr uint64_t p = 998244353;  // prime, 1 mod 4
  static uint64_t mul(uint64_t a, uint64_t b) { return (a * b) % p; }
  static uint64_t pw(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    for (; e; e >>= 1, b = mul(b, b))
      if (e & 1) r = mul(r, b);
    return r;
  }
  static uint64_t inv(uint64_t a) { return pw(a, p - 2); }
  static uint64_t root_minus_one() {
    static uint64_t i = pw(3, (p - 1) / 4);
    return i;
  }
  static bool rat(const Rat& x, uint64_t& out) {
    using boost::multiprecision::mpz_int;
    uint64_t n = uint64_t(boost::multiprecision::numerator(x) % mpz_int(p) + mpz_int(p)) % p;
    uint64_t d = uint64_t(boost::multiprecision::denominator(x) % mpz_int(p));
    if (d == 0) return false;
    out = mul(n, inv(d));
    return true;
  }
};

inline bool poly_mod_p(const Poly<GaussRat>& q, std::vector<uint64_t>& out) {
  out.clear();
  for (auto& c : q.c) {
    uint64_t re, im;
    if (!ModP::rat(c.re, re) || !ModP::rat(c.im, im)) return false;
    out.push_back((re + ModP::mul(im, ModP::root_minus_one())) % ModP::p);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  if (out.size() != size_t(q.degree() + 1)) return false;  // dropped lead: bad prime
  return true;
}

// degree of gcd(a, b) in F_p[x]; >= the true gcd degree when the prime is good
inline int gcd_degree_mod_p(std::vector<uint64_t> a, std::vector<uint64_t> b) {
  auto deg = [](const std::vector<uint64_t>& v) { return int(v.size()) - 1; };
  while (!b.empty()) {
    uint64_t linv = ModP::inv(b.back());
    while (deg(a) >= deg(b)) {
      uint64_t f = ModP::mul(a.back(), linv);
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[off + i] = (a[off + i] + ModP::p - ModP::mul(f, b[i])) % ModP::p;
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return deg(a);
}

}  // namespace detail

// Gaussian-rational case: a single-prime modular probe detects the (dominant)
// coprime case for the cost of a few machine-word Euclid steps, and only the
// genuinely shared-factor pairs pay for the exact remainder sequence.
template <>
inline Poly<GaussRat> poly_gcd(Poly<GaussRat> a, Poly<GaussRat> b) {
  std::vector<uint64_t> am, bm;
  if (detail::poly_mod_p(a, am) && detail::poly_mod_p(b, bm)) {
    if (detail::gcd_degree_mod_p(std::move(am), std::move(bm)) == 0) return Poly<GaussRat>::one();
  }
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    auto [q, r] = Poly<GaussRat>::divmod(a, b);
    (void)q;
    a = std::move(b);
    b = r.is_zero() ? r : r.monic();
  }
  return a;
}

}  // namespace qdw
