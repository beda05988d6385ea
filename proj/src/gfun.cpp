#include "qdw/gfun.hpp"

namespace qdw {

namespace {

const CycleSpec& cyc(const std::vector<CycleSpec>& basis, CycleSpec::Label l, int idx) {
  for (auto& c : basis)
    if (c.label == l && c.index == idx) return c;
  throw std::logic_error("cycle not found in basis");
}

// flat-coordinate increment int_a^b v on the tracked branch: composite
// Gauss-Legendre, panels short enough that the rule is effectively exact
Cplx flat_increment(const RatFunc<Cplx>& Q, const Cplx& a, const Cplx& b, Cplx& y) {
  static const double xg[5] = {-0.906179845938664, -0.538469310105683, 0.0, 0.538469310105683,
                               0.906179845938664};
  static const double wg[5] = {0.236926885056189, 0.478628670499366, 0.568888888888889,
                               0.478628670499366, 0.236926885056189};
  Cplx sum = 0;
  const int panels = 4;
  Cplx xp = a;
  for (int p = 0; p < panels; ++p) {
    Cplx x0 = a + (double(p) / panels) * (b - a);
    Cplx x1 = a + (double(p + 1) / panels) * (b - a);
    Cplx h = 0.5 * (x1 - x0), c = 0.5 * (x0 + x1);
    for (int i = 0; i < 5; ++i) {
      Cplx x = c + xg[i] * h;
      y = continue_sqrt(Q, xp, x, y);
      sum += wg[i] * h * y;
      xp = x;
    }
    y = continue_sqrt(Q, xp, x1, y);
    xp = x1;
  }
  return sum;
}

Cplx fd_schwarzian(const RatFunc<Cplx>& Q, const Cplx& x, const Cplx& yx, double h) {
  // z-values relative to z(x) at the 5-point stencil
  Cplx f[5];
  f[2] = 0;
  Cplx y = yx;
  f[3] = flat_increment(Q, x, x + h, y);
  y = yx;
  f[4] = flat_increment(Q, x, x + 2 * h, y);
  y = yx;
  f[1] = flat_increment(Q, x, x - h, y);
  y = yx;
  f[0] = flat_increment(Q, x, x - 2 * h, y);
  Cplx d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12 * h);
  Cplx d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12 * h * h);
  Cplx d3 = (f[4] - 2.0 * f[3] + 2.0 * f[1] - f[0]) / (2 * h * h * h);
  return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

}  // namespace

RatFunc<Cplx> q_function(const SpectralCover& cover, double check_tol) {
  RatFunc<Cplx> q = q_rational(cover.spec.numerator, cover.spec.pole_poly());
  const RatFunc<Cplx>& Q = cover.ctx->Q;
  double scale = cover.feature_scale();
  auto feats = cover.features();
  int done = 0;
  for (int k = 0; done < 5 && k < 40; ++k) {
    Cplx x = 1.6 * scale * std::exp(Cplx(0, 0.9 * k)) + cover.base_point;
    double dist = 1e300;
    for (auto& f : feats) dist = std::min(dist, std::abs(x - f));
    if (dist < 0.35 * scale) continue;
    Cplx yx = cover.ref_value(x);
    // stencil scaled to the local analyticity radius; two Richardson levels
    // knock the error down to O(h^6)
    double h = 0.05 * dist;
    Cplx s1 = fd_schwarzian(Q, x, yx, h);
    Cplx s2 = fd_schwarzian(Q, x, yx, 0.5 * h);
    Cplx s3 = fd_schwarzian(Q, x, yx, 0.25 * h);
    Cplx r1 = (4.0 * s2 - s1) / 3.0, r2 = (4.0 * s3 - s2) / 3.0;
    Cplx sv = (16.0 * r2 - r1) / 15.0;
    Cplx want = -2.0 * q.eval_c(x) * Q.eval_c(x);
    if (std::abs(sv - want) > check_tol * (1.0 + std::abs(want)))
      throw std::runtime_error("q_function: Schwarzian cross-check failed");
    ++done;
  }
  if (done < 5) throw std::runtime_error("q_function: not enough clear sample points");
  return q;
}

Cplx turning_residue(const SpectralCover& cover, const RatFunc<Cplx>& Q1, const Cplx& x_i,
                     double* route_gap) {
  auto elem = QextElem<Cplx>::odd(Q1 / cover.ctx->Q, cover.ctx);
  auto ls = local_series(elem, x_i, +1, ChartKind::XiHat, 6);
  Cplx route_a = ls.coeff(2);
  auto q = q_rational(cover.spec.numerator, cover.spec.pole_poly());
  auto lq = local_series(QextElem<Cplx>::odd(q, cover.ctx), x_i, +1, ChartKind::XiHat, 2);
  Cplx route_b = 0;
  for (int m = lq.min_exp; m <= -1; ++m) {
    int k = -2 - m;  // antiderivative of the xi^k term meets the xi^m term at xi^-1
    if (k >= 0 && k <= ls.order) route_b += lq.coeff(m) * ls.coeff(k) / double(k + 1);
  }
  if (route_gap)
    *route_gap = std::abs(route_a - (36.0 / 5.0) * route_b) / (1.0 + std::abs(route_a));
  return route_a;
}

GTermsReport gterms_report(const ModuliPoint& p, const FamilyFn& Q1fam,
                           const ModuliPoint& reference, int segments) {
  GTermsReport rep;
  RatFunc<Cplx> Q1 = Q1fam(p);
  const RatFunc<Cplx>& Q = p.cover.ctx->Q;
  bool trivial = Q1.is_zero();
  Cplx pi_i(0, M_PI);

  // path-integrated potentials relative to the reference
  std::vector<ModuliPoint> path;
  path.push_back(reference);
  CVec c0 = chart_vector(reference), c1 = chart_vector(p);
  if ((c1 - c0).norm() > 0) {
    for (int s = 1; s < segments; ++s)
      path.push_back(moduli_move(path.back(), c0 + (double(s) / segments) * (c1 - c0)));
    path.push_back(p);
    if (!trivial) {
      auto gh = integrate_form_along_path(
          [&](const ModuliPoint& q) { return theta_form(q, Q1fam(q)); }, path);
      rep.ghat = gh.value;
      rep.ghat_err = gh.err;
    }
    auto lt = integrate_form_along_path(
        [](const ModuliPoint& q) { return tau_one_form(q); }, path);
    rep.logtau = lt.value;
    rep.logtau_err = lt.err;
  }
  rep.breakdown.push_back({"ghat(path)", rep.ghat, rep.ghat_err});
  rep.breakdown.push_back({"logtau(path)", rep.logtau, rep.logtau_err});

  auto q = q_rational(p.spec.numerator, p.spec.pole_poly());
  rep.G_m1 = rep.ghat;
  rep.G_0 = Cplx(0, -12 * M_PI) * rep.logtau;
  rep.G_1 = 0;

  for (size_t j = 0; j < p.z.size(); ++j) {
    const CycleSpec& kj = cyc(p.basis, CycleSpec::Label::K, int(j));
    Cplx rj = p.r[j];
    std::string zs = "z" + std::to_string(j + 1);

    auto wq = QextElem<Cplx>::odd(q + RatFunc<Cplx>::constant(1.0 / (4.0 * rj * rj)), p.cover.ctx);
    auto Iq = regularized_pole_integral(p.cover, wq, kj, p.quad_tol);
    rep.breakdown.push_back({"reg[qv+v/4r^2] " + zs, Iq.value, Iq.err});
    rep.G_0 -= 0.5 * pi_i * rj * Iq.value;

    if (trivial) continue;
    auto w0 = QextElem<Cplx>::odd(Q1 / Q, p.cover.ctx);
    auto w2 = QextElem<Cplx>::odd((Q1 * Q1) / (Q * Q), p.cover.ctx);
    auto w3 = QextElem<Cplx>::odd(q * (Q1 / Q), p.cover.ctx);
    auto w5 = QextElem<Cplx>::odd((Q1 * Q1 * Q1) / (Q * Q * Q), p.cover.ctx);
    auto I0 = regularized_pole_integral(p.cover, w0, kj, p.quad_tol);
    auto I2 = regularized_pole_integral(p.cover, w2, kj, p.quad_tol);
    auto I3 = regularized_pole_integral(p.cover, w3, kj, p.quad_tol);
    auto I5 = regularized_pole_integral(p.cover, w5, kj, p.quad_tol);
    rep.breakdown.push_back({"int[Q1/v] " + zs, I0.value, I0.err});
    rep.breakdown.push_back({"int[Q1^2/v^3] " + zs, I2.value, I2.err});
    rep.breakdown.push_back({"int[qQ1/v] " + zs, I3.value, I3.err});
    rep.breakdown.push_back({"int[Q1^3/v^5] " + zs, I5.value, I5.err});

    rep.G_m1 += 0.5 * pi_i * rj * I0.value;
    rep.G_0 += pi_i * rj * (-1.0 / 8.0) * I2.value;  // binom(1/2, 2)
    rep.G_1 += 0.25 * pi_i * rj * I3.value + pi_i / (16.0 * rj) * I0.value +
               pi_i * rj * (1.0 / 16.0) * I5.value;  // binom(1/2, 3)
  }

  if (!trivial) {
    for (size_t i = 0; i < p.cover.turning_points.size(); ++i) {
      double gap = 0;
      Cplx res = turning_residue(p.cover, Q1, p.cover.turning_points[i], &gap);
      if (gap > 1e-7)
        throw std::runtime_error("gterms_report: turning-point residue routes disagree");
      rep.breakdown.push_back({"res x" + std::to_string(i + 1), res, gap});
      rep.G_1 -= (5.0 / 72.0) * pi_i * res;
    }
  }
  return rep;
}

Cplx g_minus1(const ModuliPoint& p, const FamilyFn& Q1, const ModuliPoint& reference,
              int segments) {
  return gterms_report(p, Q1, reference, segments).G_m1;
}

Cplx g_zero(const ModuliPoint& p, const FamilyFn& Q1, const ModuliPoint& reference, int segments) {
  return gterms_report(p, Q1, reference, segments).G_0;
}

Cplx g_one(const ModuliPoint& p, const FamilyFn& Q1) {
  return gterms_report(p, Q1, p, 1).G_1;
}

}  // namespace qdw
