#include "qdw/moduli.hpp"

namespace qdw {

namespace {

const CycleSpec& cyc(const std::vector<CycleSpec>& basis, CycleSpec::Label l, int idx) {
  for (auto& c : basis)
    if (c.label == l && c.index == idx) return c;
  throw std::logic_error("cycle not found in basis");
}

ModuliPoint from_params(const ModuliPoint& tmpl, const CVec& x) {
  int g = tmpl.g();
  std::vector<Cplx> z(tmpl.z.begin(), tmpl.z.begin() + 3);
  std::vector<Cplx> rc(size_t(g), Cplx(0));
  for (int k = 0; k < g; ++k) rc[size_t(k)] = x[k];
  for (int k = 0; k < g; ++k) z.push_back(x[g + k]);
  Poly<Cplx> R(std::move(rc));
  return make_moduli_point(std::move(z), tmpl.r, std::move(R), tmpl.tol, tmpl.quad_tol);
}

}  // namespace

ModuliPoint make_moduli_point(std::vector<Cplx> z, std::vector<Cplx> r, Poly<Cplx> R,
                              Tolerances tol, double quad_tol) {
  ModuliPoint p;
  p.z = std::move(z);
  p.r = std::move(r);
  p.R = std::move(R);
  p.tol = tol;
  p.quad_tol = quad_tol;
  p.spec = QuadDiffSpec::make(p.z, p.r, p.R);
  p.cover = build_cover(p.spec, tol);
  p.basis = homology_basis(p.cover);
  p.chart = period_chart(p.cover, p.basis, quad_tol);
  return p;
}

CVec chart_vector(const ModuliPoint& p) {
  int g = p.g();
  CVec v(2 * g);
  for (int j = 0; j < g; ++j) {
    v[j] = p.chart.A[size_t(j)];
    v[g + j] = p.chart.B[size_t(j)];
  }
  return v;
}

CVec param_vector(const ModuliPoint& p) {
  int g = p.g();
  CVec x(2 * g);
  for (int k = 0; k < g; ++k) x[k] = p.R.coeff(k);
  for (int k = 0; k < g; ++k) x[g + k] = p.z[size_t(3 + k)];
  return x;
}

double chart_scale(const ModuliPoint& p) {
  double s = 0;
  for (auto& a : p.chart.A) s = std::max(s, std::abs(a));
  for (auto& b : p.chart.B) s = std::max(s, std::abs(b));
  return std::max(s, 1e-30);
}

ModuliPoint moduli_move(const ModuliPoint& p, const CVec& target) {
  int m = 2 * p.g();
  double scale = chart_scale(p);
  CVec x = param_vector(p);
  ModuliPoint cur = p;
  for (int iter = 0; iter < 15; ++iter) {
    CVec F = chart_vector(cur) - target;
    if (F.lpNorm<Eigen::Infinity>() < p.tol.newton * scale) return cur;
    Eigen::MatrixXcd J(m, m);
    for (int k = 0; k < m; ++k) {
      double h = 1e-6 * std::max(1.0, std::abs(x[k]));
      CVec xk = x;
      xk[k] += h;
      J.col(k) = (chart_vector(from_params(p, xk)) - (F + target)) / h;
    }
    CVec dx = J.partialPivLu().solve(F);
    x -= dx;
    cur = from_params(p, x);
  }
  throw std::runtime_error("moduli_move: Newton did not converge");
}

OneFormSample theta_form(const ModuliPoint& p, const RatFunc<Cplx>& W) {
  OneFormSample s;
  if (W.is_zero()) {
    s.dA.assign(size_t(p.g()), Cplx(0));
    s.dB.assign(size_t(p.g()), Cplx(0));
    return s;
  }
  auto elem = QextElem<Cplx>::odd(W / p.cover.ctx->Q, p.cover.ctx);
  for (int j = 0; j < p.g(); ++j) {
    s.dA.push_back(integrate_differential(p.cover, elem, cyc(p.basis, CycleSpec::Label::B, j),
                                          p.quad_tol)
                       .value);
    s.dB.push_back(-integrate_differential(p.cover, elem, cyc(p.basis, CycleSpec::Label::A, j),
                                           p.quad_tol)
                        .value);
  }
  return s;
}

OneFormSample tau_one_form(const ModuliPoint& p) {
  auto q = q_rational(p.spec.numerator, p.spec.pole_poly());
  auto qv = QextElem<Cplx>::odd(q, p.cover.ctx);
  Cplx coef = 1.0 / Cplx(0, 12 * M_PI);
  OneFormSample s;
  for (int j = 0; j < p.g(); ++j) {
    s.dA.push_back(coef * integrate_differential(p.cover, qv,
                                                 cyc(p.basis, CycleSpec::Label::B, j), p.quad_tol)
                              .value);
    s.dB.push_back(-coef * integrate_differential(p.cover, qv,
                                                  cyc(p.basis, CycleSpec::Label::A, j), p.quad_tol)
                               .value);
  }
  return s;
}

Cplx closedness_defect(const FormFn& form, const ModuliPoint& p, const CVec& d1, const CVec& d2,
                       double eps) {
  CVec c0 = chart_vector(p);
  ModuliPoint p10 = moduli_move(p, c0 + eps * d1);
  ModuliPoint p01 = moduli_move(p, c0 + eps * d2);
  ModuliPoint p11 = moduli_move(p, c0 + eps * d1 + eps * d2);
  OneFormSample w00 = form(p), w10 = form(p10), w01 = form(p01), w11 = form(p11);
  auto edge = [&](const OneFormSample& a, const OneFormSample& b, const CVec& step) {
    OneFormSample avg;
    for (size_t j = 0; j < a.dA.size(); ++j) {
      avg.dA.push_back(0.5 * (a.dA[j] + b.dA[j]));
      avg.dB.push_back(0.5 * (a.dB[j] + b.dB[j]));
    }
    return avg.apply(step);
  };
  CVec e1 = eps * d1, e2 = eps * d2;
  return edge(w00, w10, e1) + edge(w10, w11, e2) - edge(w01, w11, e1) - edge(w00, w01, e2);
}

IntegralResult integrate_form_along_path(const FormFn& form, const std::vector<ModuliPoint>& path) {
  IntegralResult out;
  if (path.size() < 2) return out;
  std::vector<OneFormSample> at;
  for (auto& p : path) at.push_back(form(p));
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    CVec c1 = chart_vector(path[i]), c2 = chart_vector(path[i + 1]);
    CVec step = c2 - c1;
    ModuliPoint mid = moduli_move(path[i], c1 + 0.5 * step);
    OneFormSample wm = form(mid);
    Cplx trap = 0.5 * (at[i].apply(step) + at[i + 1].apply(step));
    Cplx simp = (at[i].apply(step) + 4.0 * wm.apply(step) + at[i + 1].apply(step)) / 6.0;
    out.value += simp;
    out.err += std::abs(simp - trap) / 15.0;
  }
  return out;
}

Cplx directional_fd(const ModuliPoint& p, const CVec& dir, double eps,
                    const std::function<Cplx(const ModuliPoint&)>& fn) {
  CVec c0 = chart_vector(p);
  auto central = [&](double h) {
    Cplx fp = fn(moduli_move(p, c0 + h * dir));
    Cplx fm = fn(moduli_move(p, c0 - h * dir));
    return (fp - fm) / (2 * h);
  };
  Cplx d1 = central(eps), d2 = central(0.5 * eps);
  return (4.0 * d2 - d1) / 3.0;
}

Cplx lemma1_check(const ModuliPoint& p, const ElemFn& w1f, const ElemFn& w2f, const CVec& dir,
                  double eps) {
  int g = p.g();
  auto w1 = w1f(p);
  auto w2 = w2f(p);
  auto w12 = QextElem<Cplx>::odd(w1.b * w2.b, p.cover.ctx);  // w1 w2 / v

  // periods of w1 and w1 w2 / v at the base point
  std::vector<Cplx> a1(size_t(g), Cplx(0)), b1(size_t(g), Cplx(0));
  std::vector<Cplx> a12(size_t(g), Cplx(0)), b12(size_t(g), Cplx(0));
  for (int j = 0; j < g; ++j) {
    a1[size_t(j)] =
        integrate_differential(p.cover, w1, cyc(p.basis, CycleSpec::Label::A, j), p.quad_tol).value;
    b1[size_t(j)] =
        integrate_differential(p.cover, w1, cyc(p.basis, CycleSpec::Label::B, j), p.quad_tol).value;
    a12[size_t(j)] =
        integrate_differential(p.cover, w12, cyc(p.basis, CycleSpec::Label::A, j), p.quad_tol)
            .value;
    b12[size_t(j)] =
        integrate_differential(p.cover, w12, cyc(p.basis, CycleSpec::Label::B, j), p.quad_tol)
            .value;
  }

  // residues of w1 at the +r_j lifts
  std::vector<Cplx> rho(p.z.size());
  for (size_t j = 0; j < p.z.size(); ++j) {
    Cplx resv = residue_at(QextElem<Cplx>::v(p.cover.ctx), p.z[j], +1);
    int sheet1 = (std::abs(resv - p.r[j]) <= std::abs(resv + p.r[j])) ? +1 : -1;
    rho[j] = residue_at(w1, p.z[j], sheet1);
  }

  // finite differences of the w2 periods and regularized pole integrals
  CVec c0 = chart_vector(p);
  struct Eval {
    std::vector<Cplx> a2, b2, reg;
  };
  auto eval = [&](double h) {
    ModuliPoint q = moduli_move(p, c0 + h * dir);
    auto w2q = w2f(q);
    Eval e;
    for (int j = 0; j < g; ++j) {
      e.a2.push_back(
          integrate_differential(q.cover, w2q, cyc(q.basis, CycleSpec::Label::A, j), q.quad_tol)
              .value);
      e.b2.push_back(
          integrate_differential(q.cover, w2q, cyc(q.basis, CycleSpec::Label::B, j), q.quad_tol)
              .value);
    }
    for (size_t j = 0; j < q.z.size(); ++j)
      e.reg.push_back(regularized_pole_integral(
                          q.cover, w2q, cyc(q.basis, CycleSpec::Label::K, int(j)), q.quad_tol)
                          .value);
    return e;
  };
  Eval ep = eval(eps), em = eval(-eps);

  Cplx lhs = 0, boundary = 0, pair = 0;
  for (int j = 0; j < g; ++j) {
    Cplx dA2 = (ep.a2[size_t(j)] - em.a2[size_t(j)]) / (2 * eps);
    Cplx dB2 = (ep.b2[size_t(j)] - em.b2[size_t(j)]) / (2 * eps);
    lhs += b1[size_t(j)] * dA2 - a1[size_t(j)] * dB2;
    pair += b12[size_t(j)] * dir[j] - a12[size_t(j)] * dir[g + j];
  }
  for (size_t j = 0; j < p.z.size(); ++j) {
    Cplx dreg = (ep.reg[j] - em.reg[j]) / (2 * eps);
    boundary += Cplx(0, M_PI) * rho[j] * dreg;
  }
  return lhs - boundary - pair;
}

HmapCheck hmap_generating_check(const ModuliPoint& p, const FamilyFn& Qt, double hbar,
                                const CVec& dir, double eps) {
  int g = p.g();

  // deformed spec Q + hbar Qt; Qt = N / pole_poly keeps the biresidues fixed
  auto deformed = [&](const ModuliPoint& q) {
    RatFunc<Cplx> qt = Qt(q);
    Poly<Cplx> D = q.spec.pole_poly();
    Poly<Cplx> mismatch = qt.den - D;
    for (auto& c : mismatch.c)
      if (std::abs(c) > 1e-9)
        throw std::invalid_argument("hmap_generating_check: family denominator must be pole_poly");
    QuadDiffSpec s1;
    s1.z = q.z;
    s1.r = q.r;
    s1.numerator = q.spec.numerator + Cplx(hbar) * (qt.num * D);
    return s1;
  };

  struct Eval {
    CVec chart1;
    Cplx regsum;
  };
  auto eval = [&](const ModuliPoint& q) {
    QuadDiffSpec s1 = deformed(q);
    SpectralCover cov1 = build_cover(s1, q.tol);
    auto basis1 = homology_basis(cov1);
    PeriodChart ch1 = period_chart(cov1, basis1, q.quad_tol);
    Eval e;
    e.chart1 = CVec(2 * g);
    for (int j = 0; j < g; ++j) {
      e.chart1[j] = ch1.A[size_t(j)];
      e.chart1[g + j] = ch1.B[size_t(j)];
    }
    e.regsum = 0;
    auto v1 = QextElem<Cplx>::v(cov1.ctx);
    auto v0 = QextElem<Cplx>::v(q.cover.ctx);
    for (size_t j = 0; j < q.z.size(); ++j) {
      Cplx r1 = regularized_pole_integral(cov1, v1, cyc(basis1, CycleSpec::Label::K, int(j)),
                                          q.quad_tol)
                    .value;
      Cplx r0 = regularized_pole_integral(q.cover, v0, cyc(q.basis, CycleSpec::Label::K, int(j)),
                                          q.quad_tol)
                    .value;
      e.regsum += Cplx(0, M_PI) * q.r[j] * (r1 - r0);
    }
    return e;
  };

  CVec c0 = chart_vector(p);
  ModuliPoint pp = moduli_move(p, c0 + eps * dir);
  ModuliPoint pm = moduli_move(p, c0 - eps * dir);
  ModuliPoint pph = moduli_move(p, c0 + 0.5 * eps * dir);
  ModuliPoint pmh = moduli_move(p, c0 - 0.5 * eps * dir);
  Eval e0 = eval(p), epp = eval(pp), epm = eval(pm), eph = eval(pph), emh = eval(pmh);
  // Richardson-extrapolated central differences, O(eps^4)
  auto rich = [&](const Cplx& fp, const Cplx& fm, const Cplx& fph, const Cplx& fmh) {
    Cplx d1 = (fp - fm) / (2 * eps);
    Cplx d2 = (fph - fmh) / eps;
    return (4.0 * d2 - d1) / 3.0;
  };

  HmapCheck out;
  out.theta0 = 0;
  out.theta1 = 0;
  for (int j = 0; j < g; ++j) {
    out.theta0 += p.chart.B[size_t(j)] * dir[j] - p.chart.A[size_t(j)] * dir[g + j];
    Cplx dA1 = rich(epp.chart1[j], epm.chart1[j], eph.chart1[j], emh.chart1[j]);
    Cplx dB1 =
        rich(epp.chart1[g + j], epm.chart1[g + j], eph.chart1[g + j], emh.chart1[g + j]);
    out.theta1 += e0.chart1[g + j] * dA1 - e0.chart1[j] * dB1;
  }
  out.reg_term = rich(epp.regsum, epm.regsum, eph.regsum, emh.regsum);
  out.theta_term = Cplx(hbar) * theta_form(p, Qt(p)).apply(dir);
  return out;
}

}  // namespace qdw
