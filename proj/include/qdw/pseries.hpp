#pragma once
// Truncated complex power series: the workhorse behind local Laurent
// expansions. A PSeries trusts exactly its stored coefficients, u^0..u^{n-1}.

#include <complex>
#include <stdexcept>
#include <vector>

#include "qdw/field.hpp"

namespace qdw {

struct PSeries {
  std::vector<Cplx> c;

  PSeries() = default;
  explicit PSeries(size_t n) : c(n, Cplx(0)) {}
  explicit PSeries(std::vector<Cplx> v) : c(std::move(v)) {}

  size_t len() const { return c.size(); }
  Cplx at(size_t i) const { return i < c.size() ? c[i] : Cplx(0); }

  PSeries truncated(size_t n) const {
    PSeries r = *this;
    if (r.c.size() > n) r.c.resize(n);
    return r;
  }

  friend PSeries operator+(const PSeries& a, const PSeries& b) {
    size_t n = std::min(a.len(), b.len());
    PSeries r(n);
    for (size_t i = 0; i < n; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend PSeries operator-(const PSeries& a, const PSeries& b) {
    size_t n = std::min(a.len(), b.len());
    PSeries r(n);
    for (size_t i = 0; i < n; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend PSeries operator*(const Cplx& s, const PSeries& a) {
    PSeries r = a;
    for (auto& x : r.c) x *= s;
    return r;
  }
  friend PSeries operator*(const PSeries& a, const PSeries& b) {
    size_t n = std::min(a.len(), b.len());
    PSeries r(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; i + j < n && j < b.len(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }

  // 1/f, requires f(0) != 0; trusted to the same length.
  PSeries inverse() const {
    if (c.empty() || c[0] == Cplx(0)) throw std::domain_error("PSeries: inverse of zero constant term");
    size_t n = len();
    PSeries r(n);
    r.c[0] = 1.0 / c[0];
    for (size_t k = 1; k < n; ++k) {
      Cplx s = 0;
      for (size_t j = 1; j <= k; ++j) s += at(j) * r.c[k - j];
      r.c[k] = -s / c[0];
    }
    return r;
  }

  // principal branch f^(1/m), requires f(0) != 0.
  PSeries root(int m) const {
    if (c.empty() || c[0] == Cplx(0)) throw std::domain_error("PSeries: root of zero constant term");
    size_t n = len();
    PSeries r(n);
    Cplx a0 = std::pow(c[0], 1.0 / double(m));
    r.c[0] = a0;
    // g = f / c0 has g(0)=1; r = a0 * g^(1/m) via the recurrence for powers
    PSeries g = (1.0 / c[0]) * *this;
    PSeries h(n);
    h.c[0] = 1.0;
    double alpha = 1.0 / double(m);
    for (size_t k = 1; k < n; ++k) {
      Cplx s = 0;
      // k*h_k = sum_{j=1..k} ((alpha+1)*j - k) g_j h_{k-j}
      for (size_t j = 1; j <= k; ++j) s += ((alpha + 1.0) * double(j) - double(k)) * g.at(j) * h.c[k - j];
      h.c[k] = s / double(k);
    }
    for (size_t k = 0; k < n; ++k) r.c[k] = a0 * h.c[k];
    return r;
  }
  PSeries sqrt() const { return root(2); }

  PSeries derivative() const {
    if (c.empty()) return PSeries();
    PSeries r(len() - 1);
    for (size_t i = 1; i < len(); ++i) r.c[i - 1] = double(i) * c[i];
    return r;
  }
  // antiderivative with zero constant term; one order longer
  PSeries antiderivative() const {
    PSeries r(len() + 1);
    for (size_t i = 0; i < len(); ++i) r.c[i + 1] = c[i] / double(i + 1);
    return r;
  }
  PSeries exp() const {
    // exp(f), f(0) = 0 required
    if (!c.empty() && c[0] != Cplx(0)) throw std::domain_error("PSeries: exp needs zero constant term");
    size_t n = len();
    PSeries r(n);
    if (n == 0) return r;
    r.c[0] = 1.0;
    for (size_t k = 1; k < n; ++k) {
      Cplx s = 0;
      for (size_t j = 1; j <= k; ++j) s += double(j) * at(j) * r.c[k - j];
      r.c[k] = s / double(k);
    }
    return r;
  }

  // f(g) with g(0) = 0; Horner on series.
  PSeries compose(const PSeries& g) const {
    if (!g.c.empty() && g.c[0] != Cplx(0)) throw std::domain_error("PSeries: compose needs g(0)=0");
    size_t n = std::min(len(), g.len());
    PSeries r(n);
    for (size_t i = len(); i-- > 0;) {
      r = (r * g).truncated(n);
      if (r.c.size() < n) r.c.resize(n, Cplx(0));
      r.c[0] += c[i];
    }
    return r;
  }

  // functional inverse of g, g(0)=0, g'(0) != 0: returns h with g(h(w)) = w.
  PSeries reversion() const {
    if (len() < 2 || c[0] != Cplx(0) || c[1] == Cplx(0))
      throw std::domain_error("PSeries: reversion needs g(0)=0, g'(0)!=0");
    size_t n = len();
    PSeries h(n);
    h.c[1] = 1.0 / c[1];
    // fixed point h <- (w - (g - g1*id) o h) / g1 ; gains one order per pass
    PSeries tail = *this;
    tail.c[1] = 0;
    for (size_t pass = 2; pass < n; ++pass) {
      PSeries t = tail.compose(h);
      for (size_t i = 0; i < n; ++i) {
        Cplx w = (i == 1) ? Cplx(1) : Cplx(0);
        h.c[i] = (w - t.at(i)) / c[1];
      }
    }
    return h;
  }

  Cplx eval(const Cplx& u) const {
    Cplx r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * u + c[i];
    return r;
  }
};

}  // namespace qdw
