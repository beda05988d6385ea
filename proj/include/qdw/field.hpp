#pragma once
// Coefficient fields: floating complex and exact Gaussian rationals.

#include <complex>
#include <stdexcept>
#include <string>
#include <boost/multiprecision/gmp.hpp>

namespace qdw {

using Cplx = std::complex<double>;
using Rat  = boost::multiprecision::mpq_rational;

// a + b*i with exact rational a, b.
struct GaussRat {
  Rat re{0}, im{0};

  GaussRat() = default;
  GaussRat(long n) : re(n) {}
  GaussRat(const Rat& r) : re(r) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  static GaussRat make(long pn, long pd, long qn = 0, long qd = 1) {
    return GaussRat(Rat(pn, pd), Rat(qn, qd));
  }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return {re, -im}; }
  Rat norm2() const { return re * re + im * im; }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    Rat n = b.norm2();
    if (n == 0) throw std::domain_error("GaussRat: division by zero");
    GaussRat p = a * b.conj();
    return {p.re / n, p.im / n};
  }
  GaussRat& operator+=(const GaussRat& o) { *this = *this + o; return *this; }
  GaussRat& operator-=(const GaussRat& o) { *this = *this - o; return *this; }
  GaussRat& operator*=(const GaussRat& o) { *this = *this * o; return *this; }
  GaussRat& operator/=(const GaussRat& o) { *this = *this / o; return *this; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  Cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  std::string str() const {
    return re.str() + (im >= 0 ? "+" : "") + im.str() + "i";
  }
};

template <class F> struct FieldTraits;

template <> struct FieldTraits<Cplx> {
  static constexpr bool exact = false;
  static bool is_zero(const Cplx& a) { return a == Cplx(0.0, 0.0); }
  static Cplx from_int(long n) { return Cplx(double(n), 0.0); }
  static Cplx to_cplx(const Cplx& a) { return a; }
};

template <> struct FieldTraits<GaussRat> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRat& a) { return a.is_zero(); }
  static GaussRat from_int(long n) { return GaussRat(n); }
  static Cplx to_cplx(const GaussRat& a) { return a.to_cplx(); }
};

}  // namespace qdw
