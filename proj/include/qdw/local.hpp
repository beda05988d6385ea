#pragma once
// Local Laurent expansions of differentials (a + b*y) dx on the double cover,
// in three charts: linear u = x - x0, the distinguished cube-root coordinate
// at a branch point, and the exponential coordinate at a puncture.
// All expansions are floating point.

#include <optional>

#include "qdw/pseries.hpp"
#include "qdw/qext.hpp"

namespace qdw {

enum class ChartKind { Linear, XiHat, Zeta };

struct LaurentSeries {
  Cplx center{};
  ChartKind kind = ChartKind::Linear;
  int min_exp = 0;
  int order = 0;                // highest trusted exponent
  std::vector<Cplx> c;          // coefficient of t^(min_exp + i)

  Cplx coeff(int e) const {
    if (e > order)
      throw std::domain_error("LaurentSeries: coefficient beyond trusted order");
    int i = e - min_exp;
    return (i >= 0 && i < int(c.size())) ? c[size_t(i)] : Cplx(0);
  }
  Cplx residue() const { return coeff(-1); }
};

namespace detail {

// Laurent expansion of a rational function about x0: f = u^val * S(u),
// S(0) != 0 (unless f == 0). Trailing noise below rel. tolerance is trimmed.
struct RatLocal {
  int val = 0;
  PSeries s;  // s.c[0] != 0
  bool zero = false;
};

// First index whose coefficient is non-negligible. Negligibility is judged
// against a local window (series tails can grow geometrically, so a global
// max would drown genuine leading coefficients).
inline int series_valuation(const std::vector<Cplx>& v, double rel_tol = 1e-9) {
  const size_t win = 8;
  for (size_t i = 0; i < v.size(); ++i) {
    double scale = 0;
    for (size_t j = i; j < std::min(v.size(), i + win); ++j)
      scale = std::max(scale, std::abs(v[j]));
    if (scale > 0 && std::abs(v[i]) > rel_tol * scale) return int(i);
  }
  return -1;
}

inline RatLocal rat_local(const RatFunc<Cplx>& f, const Cplx& x0, int nterms) {
  RatLocal out;
  if (f.is_zero()) {
    out.zero = true;
    return out;
  }
  auto nc = f.num.shifted(x0);
  auto dc = f.den.shifted(x0);
  int vn = series_valuation(nc), vd = series_valuation(dc);
  if (vn < 0 || vd < 0) throw std::domain_error("rat_local: degenerate expansion");
  out.val = vn - vd;
  size_t need = size_t(nterms);
  PSeries ns(std::vector<Cplx>(nc.begin() + vn, nc.end()));
  PSeries ds(std::vector<Cplx>(dc.begin() + vd, dc.end()));
  ns.c.resize(std::max(need, ns.c.size()), Cplx(0));
  ds.c.resize(std::max(need, ds.c.size()), Cplx(0));
  ns = ns.truncated(need);
  ds = ds.truncated(need);
  out.s = ns * ds.inverse();
  return out;
}

// Laurent data in a working variable t: f = t^val * S(t).
struct Lau {
  int val = 0;
  PSeries s;
  bool zero = false;

  static Lau zeroed() { Lau l; l.zero = true; return l; }
  Lau norm(double rel_tol = 1e-12) const {
    if (zero) return *this;
    int sh = series_valuation(s.c, rel_tol);
    if (sh < 0) return zeroed();
    Lau r;
    r.val = val + sh;
    r.s = PSeries(std::vector<Cplx>(s.c.begin() + sh, s.c.end()));
    return r;
  }
  friend Lau operator*(const Lau& a, const Lau& b) {
    if (a.zero || b.zero) return zeroed();
    Lau r;
    r.val = a.val + b.val;
    r.s = a.s * b.s;
    return r;
  }
  friend Lau operator+(const Lau& a, const Lau& b) {
    if (a.zero) return b;
    if (b.zero) return a;
    int v = std::min(a.val, b.val);
    size_t na = a.s.len() + size_t(a.val - v), nb = b.s.len() + size_t(b.val - v);
    size_t n = std::min(na, nb);
    Lau r;
    r.val = v;
    r.s = PSeries(n);
    for (size_t i = 0; i < n; ++i) {
      long ea = long(i) - (a.val - v), eb = long(i) - (b.val - v);
      Cplx x = 0;
      if (ea >= 0 && ea < long(a.s.len())) x += a.s.c[size_t(ea)];
      if (eb >= 0 && eb < long(b.s.len())) x += b.s.c[size_t(eb)];
      r.s.c[i] = x;
    }
    return r;
  }
};

inline Lau lau_from_rat(const RatFunc<Cplx>& f, const Cplx& x0, int nterms) {
  RatLocal rl = rat_local(f, x0, nterms);
  Lau l;
  if (rl.zero) return Lau::zeroed();
  l.val = rl.val;
  l.s = rl.s;
  return l;
}

// substitute u = t^2 (expand even-variable series into the square-root chart)
inline Lau sub_square(const Lau& a, size_t n) {
  if (a.zero) return a;
  Lau r;
  r.val = 2 * a.val;
  r.s = PSeries(n);
  for (size_t i = 0; i < a.s.len() && 2 * i < n; ++i) r.s.c[2 * i] = a.s.c[i];
  return r;
}

// compose Laurent a (in t) with t = w*W(w), W(0) != 0: returns Laurent in w
inline Lau sub_unit(const Lau& a, const PSeries& W, size_t n) {
  if (a.zero) return a;
  Lau r;
  r.val = a.val;
  // a = t^val S(t); t = w W(w) => w^val W^val (S o (wW))
  PSeries wW(n);  // the series of t in w, with w factored out left in place:
  // we need S(t(w)) where t(w) = w*W(w): build t-series then compose
  PSeries tser(n);
  for (size_t i = 0; i + 1 < n && i < W.len(); ++i) tser.c[i + 1] = W.c[i];
  PSeries Sc = a.s;
  Sc.c.resize(n, Cplx(0));
  PSeries comp = Sc.truncated(n).compose(tser);
  // W^val
  PSeries Wp(std::vector<Cplx>(W.c.begin(), W.c.begin() + std::min(n, W.len())));
  Wp.c.resize(n, Cplx(0));
  PSeries Wpow(n);
  Wpow.c[0] = 1.0;
  int e = a.val;
  PSeries base = Wp;
  bool invert = e < 0;
  if (invert) base = Wp.inverse();
  for (int k = 0; k < std::abs(e); ++k) Wpow = (Wpow * base).truncated(n);
  r.s = (comp * Wpow).truncated(n);
  return r;
}

}  // namespace detail

// ---- chart data ------------------------------------------------------------

// Branch-point chart: w^2 = x - x0, distinguished coordinate xi with
// xi^3 = int v, xi = w * X(w^2-free series in w). Provides the pieces needed
// to expand differentials near a turning point.
struct BranchChart {
  Cplx x0;
  size_t n;             // working length in w
  PSeries yw;           // y(w)/w : unit series (even in w)
  PSeries xi_over_w;    // xi(w)/w : unit series
  PSeries w_of_xi;      // w(xi)/xi : unit series
  PSeries dxi_dw;       // d xi / d w
};

// Puncture chart: zeta = u*exp(H(u)) with d zeta/zeta = v/r; residue of v at
// the chosen lift is r_eff.
struct PunctureChart {
  Cplx z;
  size_t n;
  Cplx r_eff;           // residue of v at this lift (sheet-dependent sign)
  PSeries yu;           // y(u)*u : unit series
  PSeries zeta_over_u;  // zeta(u)/u
  PSeries u_of_zeta;    // u(zeta)/zeta
  PSeries dzeta_du;     // d zeta / d u
};

BranchChart branch_chart(const QContext<Cplx>& ctx, const Cplx& x0, int sheet, size_t n);
PunctureChart puncture_chart(const QContext<Cplx>& ctx, const Cplx& z, int sheet, size_t n);

// Expand the differential (a + b y) dx in the requested chart.
// `sheet`: +1 selects the principal local branch of y, -1 the other one.
LaurentSeries local_series(const QextElem<Cplx>& w, const Cplx& center, int sheet,
                           ChartKind kind, int order);

// Residue of (a + b y) dx at `center` on the given sheet; picks the w-chart
// automatically when Q has odd valuation there (branch point).
Cplx residue_at(const QextElem<Cplx>& w, const Cplx& center, int sheet);

}  // namespace qdw
