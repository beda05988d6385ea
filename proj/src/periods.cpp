#include "qdw/periods.hpp"

namespace qdw {

namespace {

// Gauss 7 / Kronrod 15 pair on [-1, 1]
const double kXK[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                       0.741531185599394, 0.586087235467691, 0.405845151377397,
                       0.207784955007898, 0.0};
const double kWK[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                       0.140653259715525, 0.169004726639267, 0.190350578064785,
                       0.204432940075298, 0.209482141084728};
const double kWG[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct SegResult {
  Cplx value{};
  double err = 0;
  double l1 = 0;  // mass of |integrand|, sets the attainable precision floor
};

Cplx eval_elem(const QextElem<Cplx>& e, const Cplx& x, const Cplx& y) {
  Cplx val = 0;
  if (!e.a.is_zero()) val += e.a.eval_c(x);
  if (!e.b.is_zero()) val += e.b.eval_c(x) * y;
  return val;
}

// GK rule on [x0, x1]; y tracked node to node starting from the end where the
// sheet is known. y_known is at x0 if from_left, else at x1.
SegResult gk_segment(const RatFunc<Cplx>& Q, const QextElem<Cplx>& elem, const Cplx& x0,
                     const Cplx& x1, const Cplx& y_known, bool from_left) {
  // 15 Kronrod nodes in increasing order of t in [0, 1]
  double ts[15];
  for (int i = 0; i < 7; ++i) ts[i] = 0.5 * (1.0 - kXK[i]);
  ts[7] = 0.5;
  for (int i = 0; i < 7; ++i) ts[14 - i] = 0.5 * (1.0 + kXK[i]);
  Cplx h = x1 - x0;
  Cplx fx[15];
  if (from_left) {
    Cplx y = y_known, xp = x0;
    for (int i = 0; i < 15; ++i) {
      Cplx x = x0 + ts[i] * h;
      y = continue_sqrt(Q, xp, x, y);
      fx[i] = eval_elem(elem, x, y);
      xp = x;
    }
  } else {
    Cplx y = y_known, xp = x1;
    for (int i = 14; i >= 0; --i) {
      Cplx x = x0 + ts[i] * h;
      y = continue_sqrt(Q, xp, x, y);
      fx[i] = eval_elem(elem, x, y);
      xp = x;
    }
  }
  Cplx k15 = kWK[7] * fx[7], g7 = kWG[3] * fx[7];
  double m15 = kWK[7] * std::abs(fx[7]);
  for (int i = 0; i < 7; ++i) {
    k15 += kWK[i] * (fx[i] + fx[14 - i]);
    m15 += kWK[i] * (std::abs(fx[i]) + std::abs(fx[14 - i]));
  }
  for (int i = 0; i < 3; ++i) g7 += kWG[i] * (fx[2 * i + 1] + fx[13 - 2 * i]);
  SegResult r;
  r.value = 0.5 * h * k15;
  r.err = 0.5 * std::abs(h) * std::abs(k15 - g7);
  r.l1 = 0.5 * std::abs(h) * m15;
  return r;
}

// floor_abs: roundoff floor, 1e-15 x the global mass of |integrand| over the
// whole chain -- a tighter absolute target is unattainable in double
// precision and bisection would grind at the depth cap trying to reach it
SegResult adaptive_segment(const RatFunc<Cplx>& Q, const QextElem<Cplx>& elem, const Cplx& x0,
                           const Cplx& x1, const Cplx& y_known, bool from_left, double tol_abs,
                           double floor_abs, int depth) {
  SegResult r = gk_segment(Q, elem, x0, x1, y_known, from_left);
  if (r.err <= std::max(tol_abs, floor_abs) || depth >= 24) return r;
  Cplx m = 0.5 * (x0 + x1);
  if (from_left) {
    SegResult l = adaptive_segment(Q, elem, x0, m, y_known, true, 0.5 * tol_abs, floor_abs, depth + 1);
    Cplx ym = continue_sqrt(Q, x0, m, y_known);
    SegResult rr = adaptive_segment(Q, elem, m, x1, ym, true, 0.5 * tol_abs, floor_abs, depth + 1);
    return {l.value + rr.value, l.err + rr.err, l.l1 + rr.l1};
  }
  SegResult rr = adaptive_segment(Q, elem, m, x1, y_known, false, 0.5 * tol_abs, floor_abs, depth + 1);
  Cplx ym = continue_sqrt(Q, x1, m, y_known);
  SegResult l = adaptive_segment(Q, elem, x0, m, ym, false, 0.5 * tol_abs, floor_abs, depth + 1);
  return {l.value + rr.value, l.err + rr.err, l.l1 + rr.l1};
}

// integral along pts[i0..i1] given y at vertex iy (all vertices trackable)
SegResult chain_integral(const RatFunc<Cplx>& Q, const QextElem<Cplx>& elem,
                         const std::vector<Cplx>& pts, size_t i0, size_t i1, size_t iy, Cplx y_iy,
                         double tol) {
  double total_len = 0;
  for (size_t i = i0; i < i1; ++i) total_len += std::abs(pts[i + 1] - pts[i]);
  if (total_len == 0) return {};
  // vertex sheet values outward from iy
  std::vector<Cplx> ys(pts.size());
  ys[iy] = y_iy;
  for (size_t i = iy; i < i1; ++i) ys[i + 1] = continue_sqrt(Q, pts[i], pts[i + 1], ys[i]);
  for (size_t i = iy; i > i0; --i) ys[i - 1] = continue_sqrt(Q, pts[i], pts[i - 1], ys[i]);
  // coarse first pass for the global mass, which sets the roundoff floor
  double l1_est = 0;
  for (size_t i = i0; i < i1; ++i)
    l1_est += gk_segment(Q, elem, pts[i], pts[i + 1], ys[i], true).l1;
  double floor_abs = 1e-15 * l1_est;
  SegResult sum;
  for (size_t i = i0; i < i1; ++i) {
    double share = std::abs(pts[i + 1] - pts[i]) / total_len;
    SegResult r = adaptive_segment(Q, elem, pts[i], pts[i + 1], ys[i], true, tol * share, floor_abs, 0);
    sum.value += r.value;
    sum.err += r.err;
    sum.l1 += r.l1;
  }
  return sum;
}

}  // namespace

IntegralResult integrate_differential(const SpectralCover& cover, const QextElem<Cplx>& elem,
                                      const CycleSpec& cycle, double tol) {
  const auto& Q = cover.ctx->Q;
  const auto& pts = cycle.path.pts;
  if (pts.size() < 2) throw std::invalid_argument("integrate_differential: empty path");
  SegResult sum;
  if (cycle.label == CycleSpec::Label::K) {
    // endpoints sit at a puncture: y is tracked from the first interior
    // vertex, and the two end segments are integrated with the sheet pinned
    // at their interior end (the integrand itself must stay integrable)
    size_t m = pts.size() - 1;
    sum = chain_integral(Q, elem, pts, 1, m - 1, 1, cycle.start_value, tol);
    Cplx y_last = cycle.start_value;
    for (size_t i = 1; i < m - 1; ++i) y_last = continue_sqrt(Q, pts[i], pts[i + 1], y_last);
    SegResult head = adaptive_segment(Q, elem, pts[0], pts[1], cycle.start_value, false,
                                      0.1 * tol, 1e-15 * sum.l1, 0);
    SegResult tail = adaptive_segment(Q, elem, pts[m - 1], pts[m], y_last, true, 0.1 * tol,
                                      1e-15 * sum.l1, 0);
    sum.value += head.value + tail.value;
    sum.err += head.err + tail.err;
    sum.l1 += head.l1 + tail.l1;
  } else {
    sum = chain_integral(Q, elem, pts, 0, pts.size() - 1, 0, cycle.start_value, tol);
  }
  if (sum.err > 50 * tol + 1e-12 * sum.l1)
    throw std::runtime_error("integrate_differential: tolerance not achieved on " + cycle.name());
  return {cycle.weight * sum.value, cycle.weight * sum.err};
}

PeriodChart period_chart(const SpectralCover& cover, const std::vector<CycleSpec>& basis,
                         double tol) {
  PeriodChart pc;
  auto v = QextElem<Cplx>::v(cover.ctx);
  for (const auto& c : basis) {
    if (c.label == CycleSpec::Label::K) continue;
    IntegralResult r = integrate_differential(cover, v, c, tol);
    switch (c.label) {
      case CycleSpec::Label::A:
        pc.A.push_back(r.value);
        pc.A_err.push_back(r.err);
        break;
      case CycleSpec::Label::B:
        pc.B.push_back(r.value);
        pc.B_err.push_back(r.err);
        break;
      default:
        pc.t_periods.push_back(r.value);
        pc.t_err.push_back(r.err);
        break;
    }
  }
  // consistency: t-periods against the residue theorem
  for (size_t j = 0; j < pc.t_periods.size(); ++j) {
    Cplx want = Cplx(0, 2 * M_PI) * cover.spec.r[j];
    if (std::abs(pc.t_periods[j] - want) > std::max(1e3 * tol, 1e3 * pc.t_err[j]))
      throw std::runtime_error("period_chart: t-period inconsistent with residue at puncture " +
                               std::to_string(j));
  }
  return pc;
}

IntegralResult regularized_pole_integral(const SpectralCover& cover, const QextElem<Cplx>& elem,
                                         const CycleSpec& kappa, double tol, double cutoff_frac) {
  if (kappa.label != CycleSpec::Label::K)
    throw std::invalid_argument("regularized_pole_integral: needs a kappa arc");
  const auto& Q = cover.ctx->Q;
  const auto& pts = kappa.path.pts;
  size_t m = pts.size() - 1;
  Cplx z = cover.spec.z[size_t(kappa.index)];

  double d = std::numeric_limits<double>::infinity();
  for (auto& f : cover.features())
    if (std::abs(f - z) > 1e-12) d = std::min(d, std::abs(f - z));
  double rc = cutoff_frac * d;

  // truncation points on the first and last segments at |x - z| = rc
  auto cut_point = [&](const Cplx& far) {
    if (std::abs(far - z) <= rc)
      throw std::runtime_error("regularized_pole_integral: path too short near puncture");
    return z + rc * (far - z) / std::abs(far - z);
  };
  Cplx X1 = cut_point(pts[1]);
  Cplx X2 = cut_point(pts[m - 1]);

  // series contribution from z out to X in the zeta chart of the sheet
  // matching the tracked value y_at_X; returns the finite part
  int order = std::max(cover.tol.series_order, 64);
  auto series_part = [&](const Cplx& X, const Cplx& y_at_X, double& err) {
    Cplx u = X - z;
    auto pick_sheet = [&](int s) {
      PunctureChart ch = puncture_chart(*cover.ctx, z, s, size_t(order));
      Cplx ypred = ch.yu.eval(u) / u;
      return std::abs(ypred - y_at_X);
    };
    int sheet = (pick_sheet(+1) <= pick_sheet(-1)) ? +1 : -1;
    PunctureChart ch = puncture_chart(*cover.ctx, z, sheet, size_t(order));
    LaurentSeries ls = local_series(elem, z, sheet, ChartKind::Zeta, order - 4);
    if (ls.min_exp < -1)
      throw std::runtime_error("regularized_pole_integral: pole worse than simple at puncture");
    Cplx zeta = u * ch.zeta_over_u.eval(u);
    Cplx val = ls.coeff(-1) * std::log(zeta);
    Cplx zp = zeta;
    for (int k = 0; k <= ls.order; ++k) {
      val += ls.coeff(k) * zp / double(k + 1);
      zp *= zeta;
    }
    // geometric tail estimate from the observed coefficient growth
    double g = std::pow(std::abs(ls.coeff(ls.order)) /
                            std::max(1e-300, std::abs(ls.coeff(ls.order - 8))),
                        1.0 / 8);
    double last = std::abs(ls.coeff(ls.order)) * std::pow(std::abs(zeta), ls.order + 1) /
                  double(ls.order + 1);
    err += last / std::max(0.2, 1.0 - g * std::abs(zeta));
    return val;
  };

  // tracked sheet values at X1 and X2
  Cplx yX1 = continue_sqrt(Q, pts[1], X1, kappa.start_value);
  Cplx y_last = kappa.start_value;
  for (size_t i = 1; i < m - 1; ++i) y_last = continue_sqrt(Q, pts[i], pts[i + 1], y_last);
  Cplx yX2 = continue_sqrt(Q, pts[m - 1], X2, y_last);

  // middle: X1 -> pts[1] -> ... -> pts[m-1] -> X2
  std::vector<Cplx> mid;
  mid.push_back(X1);
  for (size_t i = 1; i <= m - 1; ++i) mid.push_back(pts[i]);
  mid.push_back(X2);
  SegResult midr = chain_integral(Q, elem, mid, 0, mid.size() - 1, 0, yX1, tol);

  double serr = 0;
  Cplx head = series_part(X1, yX1, serr);   // reg int from z to X1
  Cplx tail = series_part(X2, yX2, serr);   // reg int from z to X2
  IntegralResult out;
  out.value = head + midr.value - tail;     // int = reg[z,X1] + [X1,X2] - reg[z,X2]
  out.err = midr.err + serr;
  if (out.err > 100 * tol + 1e-12 * midr.l1)
    throw std::runtime_error("regularized_pole_integral: tolerance not achieved");
  return out;
}

std::vector<IntegralResult> binomial_period_expansion(const SpectralCover& cover,
                                                      const RatFunc<Cplx>& Qtilde,
                                                      const CycleSpec& cycle, int K, double tol) {
  std::vector<IntegralResult> out;
  RatFunc<Cplx> ratio = Qtilde / cover.ctx->Q;
  RatFunc<Cplx> pw = RatFunc<Cplx>::one();
  double binom = 1.0;  // binom(1/2, k)
  for (int k = 0; k <= K; ++k) {
    auto elem = QextElem<Cplx>::odd(pw, cover.ctx);  // pw * y = Qtilde^k / v^(2k-1)
    IntegralResult r = integrate_differential(cover, elem, cycle, tol);
    out.push_back({binom * r.value, std::abs(binom) * r.err});
    pw = pw * ratio;
    binom *= (0.5 - k) / double(k + 1);
  }
  return out;
}

}  // namespace qdw
