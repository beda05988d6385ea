#include "qdw/local.hpp"

namespace qdw {

using detail::Lau;
using detail::lau_from_rat;
using detail::sub_square;
using detail::sub_unit;

BranchChart branch_chart(const QContext<Cplx>& ctx, const Cplx& x0, int sheet, size_t n) {
  Lau q = lau_from_rat(ctx.Q, x0, int(n)).norm();
  if (q.zero || (q.val % 2) == 0)
    throw std::domain_error("branch_chart: Q does not have odd valuation here");
  if (q.val != 1) throw std::domain_error("branch_chart: zero of Q is not simple");
  BranchChart ch;
  ch.x0 = x0;
  ch.n = n;
  // Q = u g(u), u = w^2: y = sheet * w * sqrt(g(w^2))
  PSeries g = q.s;
  g.c.resize(n, Cplx(0));
  Lau gw = sub_square(Lau{0, g, false}, n);
  ch.yw = double(sheet) * gw.s.sqrt();
  // int y dx = int 2 w^2 yw dw = w^3 J(w)
  PSeries integrand(n);
  for (size_t i = 0; i + 2 < n; ++i) integrand.c[i + 2] = 2.0 * ch.yw.c[i];
  PSeries I = integrand.antiderivative().truncated(n);  // starts at w^3
  PSeries J(n);
  for (size_t i = 0; i + 3 < n + 3 && i < n; ++i) J.c[i] = (i + 3 < I.len()) ? I.c[i + 3] : Cplx(0);
  ch.xi_over_w = J.root(3);
  // xi(w) full series and its reversion
  PSeries xiw(n);
  for (size_t i = 0; i + 1 < n; ++i) xiw.c[i + 1] = ch.xi_over_w.c[i];
  ch.dxi_dw = xiw.derivative();
  PSeries rev = xiw.reversion();
  ch.w_of_xi = PSeries(n);
  for (size_t i = 0; i + 1 < n && i + 1 < rev.len(); ++i) ch.w_of_xi.c[i] = rev.c[i + 1];
  return ch;
}

PunctureChart puncture_chart(const QContext<Cplx>& ctx, const Cplx& z, int sheet, size_t n) {
  Lau q = lau_from_rat(ctx.Q, z, int(n)).norm();
  if (q.zero || q.val != -2)
    throw std::domain_error("puncture_chart: Q does not have a double pole here");
  PunctureChart ch;
  ch.z = z;
  ch.n = n;
  PSeries cu = q.s;
  cu.c.resize(n, Cplx(0));
  ch.yu = double(sheet) * cu.sqrt();  // y = yu / u
  ch.r_eff = ch.yu.c[0];
  // v / r_eff = (1/u)(1 + e(u)) du, H = int e/u, zeta = u exp(H)
  PSeries e = (1.0 / ch.r_eff) * ch.yu;
  e.c[0] = 0;
  PSeries eu(n);  // e/u
  for (size_t i = 0; i + 1 < n + 1 && i + 1 < e.len(); ++i) eu.c[i] = e.c[i + 1];
  PSeries H = eu.antiderivative().truncated(n);
  ch.zeta_over_u = H.exp();
  PSeries zu(n);
  for (size_t i = 0; i + 1 < n; ++i) zu.c[i + 1] = ch.zeta_over_u.c[i];
  ch.dzeta_du = zu.derivative();
  PSeries rev = zu.reversion();
  ch.u_of_zeta = PSeries(n);
  for (size_t i = 0; i + 1 < n && i + 1 < rev.len(); ++i) ch.u_of_zeta.c[i] = rev.c[i + 1];
  return ch;
}

namespace {

// differential (a + b y) dx as a Laurent series in the linear chart u
Lau linear_lau(const QextElem<Cplx>& w, const Cplx& center, int sheet, size_t n) {
  Lau q = lau_from_rat(w.ctx->Q, center, int(n)).norm();
  if (q.zero) throw std::domain_error("local_series: Q vanishes identically?");
  if (q.val % 2 != 0)
    throw std::domain_error("local_series: linear chart at a branch point (use XiHat)");
  PSeries c0 = q.s;
  c0.c.resize(n, Cplx(0));
  Lau y{q.val / 2, double(sheet) * c0.sqrt(), false};
  Lau a = lau_from_rat(w.a, center, int(n)).norm();
  Lau b = lau_from_rat(w.b, center, int(n)).norm();
  return (a + b * y).norm();
}

// differential in the w chart (w^2 = x - x0) at a branch point
Lau wchart_lau(const QextElem<Cplx>& w, const BranchChart& ch, size_t n) {
  Lau a = sub_square(lau_from_rat(w.a, ch.x0, int(n)).norm(), 2 * n);
  Lau b = sub_square(lau_from_rat(w.b, ch.x0, int(n)).norm(), 2 * n);
  Lau y{1, ch.yw, false};
  Lau f = (a + b * y).norm();
  // f dx = f * 2 w dw
  Lau r = f;
  if (!r.zero) {
    r.val += 1;
    r.s = 2.0 * r.s;
  }
  return r;
}

LaurentSeries finish(Lau l, const Cplx& center, ChartKind kind, int order) {
  LaurentSeries out;
  out.center = center;
  out.kind = kind;
  if (l.zero) {
    out.min_exp = 0;
    out.order = order;
    return out;
  }
  l = l.norm();
  out.min_exp = l.val;
  int trusted = l.val + int(l.s.len()) - 1;
  if (trusted < order)
    throw std::domain_error("local_series: series budget insufficient for requested order");
  out.order = order;
  size_t keep = size_t(order - l.val + 1);
  out.c.assign(l.s.c.begin(), l.s.c.begin() + std::min(keep, l.s.len()));
  return out;
}

}  // namespace

LaurentSeries local_series(const QextElem<Cplx>& w, const Cplx& center, int sheet,
                           ChartKind kind, int order) {
  size_t n = size_t(std::max(8, order + 24));
  switch (kind) {
    case ChartKind::Linear:
      return finish(linear_lau(w, center, sheet, n), center, kind, order);
    case ChartKind::XiHat: {
      BranchChart ch = branch_chart(*w.ctx, center, sheet, 2 * n);
      Lau F = wchart_lau(w, ch, n);
      // G(xi) = F(w(xi)) * dw/dxi
      Lau Fx = sub_unit(F, ch.w_of_xi, 2 * n);
      // dw/dxi = (w(xi))' as a series in xi
      PSeries wxi(2 * n);
      for (size_t i = 0; i + 1 < 2 * n && i < ch.w_of_xi.len(); ++i) wxi.c[i + 1] = ch.w_of_xi.c[i];
      PSeries dwdxi = wxi.derivative();
      dwdxi.c.resize(2 * n, Cplx(0));
      Lau G = Fx * Lau{0, dwdxi, false};
      return finish(G, center, kind, order);
    }
    case ChartKind::Zeta: {
      PunctureChart ch = puncture_chart(*w.ctx, center, sheet, n);
      Lau a = lau_from_rat(w.a, center, int(n)).norm();
      Lau b = lau_from_rat(w.b, center, int(n)).norm();
      Lau y{-1, ch.yu, false};
      Lau f = (a + b * y).norm();
      // G(zeta) = f(u(zeta)) * du/dzeta
      Lau fz = sub_unit(f, ch.u_of_zeta, n);
      PSeries dzdu = ch.dzeta_du;
      dzdu.c.resize(n, Cplx(0));
      Lau dz{0, dzdu, false};
      Lau dz_at = sub_unit(dz, ch.u_of_zeta, n);
      Lau G = fz * Lau{0, dz_at.s.inverse(), false};
      return finish(G, center, kind, order);
    }
  }
  throw std::logic_error("local_series: unknown chart kind");
}

Cplx residue_at(const QextElem<Cplx>& w, const Cplx& center, int sheet) {
  size_t n = 40;
  Lau q = lau_from_rat(w.ctx->Q, center, int(n)).norm();
  if (!q.zero && (q.val % 2) != 0) {
    BranchChart ch = branch_chart(*w.ctx, center, sheet, 2 * n);
    Lau F = wchart_lau(w, ch, n);  // residue = coeff of w^{-1} in F dw
    F = F.norm();
    if (F.zero) return 0;
    int idx = -1 - F.val;
    return (idx >= 0 && idx < int(F.s.len())) ? F.s.c[size_t(idx)] : Cplx(0);
  }
  Lau f = linear_lau(w, center, sheet, n).norm();
  if (f.zero) return 0;
  int idx = -1 - f.val;
  return (idx >= 0 && idx < int(f.s.len())) ? f.s.c[size_t(idx)] : Cplx(0);
}

}  // namespace qdw
