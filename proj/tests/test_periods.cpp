#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdw/periods.hpp"

using namespace qdw;

namespace {

QuadDiffSpec four_spec() {
  std::vector<GaussRat> z{GaussRat(-1), GaussRat(1), GaussRat(Rat(0), Rat(2)),
                          GaussRat(Rat(2, 5), Rat(-6, 5))};
  std::vector<GaussRat> r{GaussRat(Rat(4, 5)), GaussRat(Rat(6, 5)), GaussRat(Rat(3, 5)),
                          GaussRat(1)};
  Poly<GaussRat> R(std::vector<GaussRat>{GaussRat(Rat(-2), Rat(4))});
  return QuadDiffSpecT<GaussRat>::make(z, r, R).to_cplx();
}

QuadDiffSpec three_spec() {
  std::vector<Cplx> zs{{0, 0}, {1, 0}, {2, 1.5}};
  std::vector<Cplx> rs{{0.5, 0}, {0.8, 0}, {1.1, 0}};
  return QuadDiffSpec::make(zs, rs, Poly<Cplx>());
}

const CycleSpec* find_cycle(const std::vector<CycleSpec>& basis, CycleSpec::Label l, int idx) {
  for (auto& c : basis)
    if (c.label == l && c.index == idx) return &c;
  return nullptr;
}

// dense trapezoid oracle along the cycle's polyline, sub subdivisions per edge
Cplx dense_trapezoid(const SpectralCover& cov, const QextElem<Cplx>& e, const CycleSpec& c,
                     int sub) {
  Cplx sum = 0, y = c.start_value;
  size_t first = c.start_vertex();
  auto val = [&](const Cplx& x, const Cplx& yy) {
    Cplx v = 0;
    if (!e.a.is_zero()) v += e.a.eval_c(x);
    if (!e.b.is_zero()) v += e.b.eval_c(x) * yy;
    return v;
  };
  for (size_t i = first; i + 1 < c.path.pts.size(); ++i) {
    Cplx p = c.path.pts[i], q = c.path.pts[i + 1];
    Cplx xp = p, fp = val(p, y);
    for (int k = 1; k <= sub; ++k) {
      Cplx x = p + (double(k) / sub) * (q - p);
      y = continue_sqrt(cov.ctx->Q, xp, x, y);
      Cplx f = val(x, y);
      sum += 0.5 * (fp + f) * (x - xp);
      xp = x;
      fp = f;
    }
  }
  return c.weight * sum;
}

}  // namespace

TEST_CASE("t-periods recover the residues") {
  auto spec = four_spec();
  auto cov = build_cover(spec, Tolerances{});
  auto basis = homology_basis(cov);
  auto pc = period_chart(cov, basis, 1e-10);
  REQUIRE(pc.A.size() == 1);
  REQUIRE(pc.B.size() == 1);
  REQUIRE(pc.t_periods.size() == 4);
  for (int j = 0; j < 4; ++j) {
    Cplx want = Cplx(0, 2 * M_PI) * spec.r[size_t(j)];
    CHECK(std::abs(pc.t_periods[size_t(j)] - want) < 1e-9);
    CHECK(pc.t_err[size_t(j)] < 1e-9);
  }
}

TEST_CASE("exact differentials integrate to zero over closed cycles") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  // d(1/(x - z1)) = -1/(x - z1)^2 dx, single-valued: zero over any closed loop
  Poly<Cplx> lin = Poly<Cplx>::linear(cov.spec.z[0]);
  auto df = QextElem<Cplx>::even(RatFunc<Cplx>(-Poly<Cplx>::one(), lin * lin), cov.ctx);
  for (auto& c : basis) {
    if (c.label == CycleSpec::Label::K) continue;
    auto r = integrate_differential(cov, df, c, 1e-10);
    CHECK(std::abs(r.value) < 1e-8);
  }
}

TEST_CASE("periods against a dense-trapezoid oracle") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  auto v = QextElem<Cplx>::v(cov.ctx);
  const CycleSpec* a = find_cycle(basis, CycleSpec::Label::A, 0);
  const CycleSpec* b = find_cycle(basis, CycleSpec::Label::B, 0);
  REQUIRE(a);
  REQUIRE(b);
  for (const CycleSpec* c : {a, b}) {
    auto got = integrate_differential(cov, v, *c, 1e-10);
    Cplx oracle = dense_trapezoid(cov, v, *c, 4000);
    Cplx oracle2 = dense_trapezoid(cov, v, *c, 8000);
    // Richardson step of the trapezoid oracle
    Cplx extr = oracle2 + (oracle2 - oracle) / 3.0;
    CHECK(std::abs(got.value - extr) < 1e-8 * (1.0 + std::abs(extr)));
    CHECK(std::abs(got.value) > 1e-3);
  }
}

TEST_CASE("four-puncture chart regression goldens") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto pc = period_chart(cov, homology_basis(cov), 1e-11);
  CHECK(std::abs(pc.A[0] - Cplx(-0.095764612937326, -1.186813307107915)) < 1e-9);
  CHECK(std::abs(pc.B[0] - Cplx(-1.716823202506288, -2.232528490762404)) < 1e-9);
}

TEST_CASE("three punctures give an empty a/b chart") {
  auto cov = build_cover(three_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  auto pc = period_chart(cov, basis, 1e-10);
  CHECK(pc.A.empty());
  CHECK(pc.B.empty());
  CHECK(pc.t_periods.size() == 3);
}

TEST_CASE("rescaling Q by kappa^2 scales every period by kappa") {
  auto spec = four_spec();
  Cplx kappa(1.3, 0.4);
  QuadDiffSpec scaled = spec;
  scaled.numerator = (kappa * kappa) * scaled.numerator;
  for (auto& r : scaled.r) r *= kappa;
  auto cov = build_cover(spec, Tolerances{});
  auto cov2 = build_cover(scaled, Tolerances{});
  auto pc = period_chart(cov, homology_basis(cov), 1e-10);
  auto pc2 = period_chart(cov2, homology_basis(cov2), 1e-10);
  // same geometry, so entries correspond 1:1
  for (size_t i = 0; i < pc.A.size(); ++i)
    CHECK(std::abs(pc2.A[i] - kappa * pc.A[i]) < 1e-7 * std::abs(pc.A[i]));
  for (size_t i = 0; i < pc.B.size(); ++i)
    CHECK(std::abs(pc2.B[i] - kappa * pc.B[i]) < 1e-7 * std::abs(pc.B[i]));
  for (size_t i = 0; i < pc.t_periods.size(); ++i)
    CHECK(std::abs(pc2.t_periods[i] - kappa * pc.t_periods[i]) < 1e-7 * std::abs(pc.t_periods[i]));
}

TEST_CASE("linearity and deformation invariance") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  const CycleSpec* a = find_cycle(basis, CycleSpec::Label::A, 0);
  REQUIRE(a);
  auto v = QextElem<Cplx>::v(cov.ctx);
  auto w = QextElem<Cplx>::even(RatFunc<Cplx>(Poly<Cplx>::one(), Poly<Cplx>::linear(cov.spec.z[2])),
                                cov.ctx);
  Cplx al(0.7, -0.2), be(1.1, 0.5);
  auto lhs = integrate_differential(cov, al * v + be * w, *a, 1e-10);
  auto r1 = integrate_differential(cov, v, *a, 1e-10);
  auto r2 = integrate_differential(cov, w, *a, 1e-10);
  CHECK(std::abs(lhs.value - (al * r1.value + be * r2.value)) < 1e-8);

  // wiggle the polyline within the clearance corridor
  CycleSpec moved = *a;
  for (size_t i = 1; i + 1 < moved.path.pts.size(); ++i)
    moved.path.pts[i] += 0.2 * cov.abs_clearance() *
                         Cplx(std::cos(double(3 * i)), std::sin(double(5 * i)));
  moved.start_value = cov.ref_value(moved.path.pts[0]);
  auto r1m = integrate_differential(cov, v, moved, 1e-10);
  CHECK(std::abs(r1m.value - r1.value) < 1e-8);
}

TEST_CASE("binomial period expansion") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  const CycleSpec* a = find_cycle(basis, CycleSpec::Label::A, 0);
  REQUIRE(a);
  // perturbation with simple poles at the punctures and x^-4 decay
  RatFunc<Cplx> Qt(Poly<Cplx>::constant(Cplx(0.6, 0.3)), cov.spec.pole_poly());
  auto v = QextElem<Cplx>::v(cov.ctx);

  auto terms = binomial_period_expansion(cov, Qt, *a, 3, 1e-11);
  auto av = integrate_differential(cov, v, *a, 1e-11);
  CHECK(std::abs(terms[0].value - av.value) < 1e-9);
  auto half_qt_over_v = QextElem<Cplx>::odd(Cplx(0.5) * (Qt / cov.ctx->Q), cov.ctx);
  auto k1 = integrate_differential(cov, half_qt_over_v, *a, 1e-11);
  CHECK(std::abs(terms[1].value - k1.value) < 1e-9);

  // truncation error scales like hbar^(K+1); direct values use an adaptive
  // integral of sqrt(Q + hbar Qt) along the same path (same numerator shape,
  // so it is again a covered quadratic differential)
  auto direct = [&](double hb) {
    QuadDiffSpec sh = cov.spec;
    sh.numerator = sh.numerator + Cplx(hb, 0) * Cplx(0.6, 0.3) * sh.pole_poly();
    for (size_t j = 0; j < sh.r.size(); ++j) {
      Cplx prod = 1;
      for (size_t k = 0; k < sh.z.size(); ++k)
        if (k != j) prod *= (sh.z[j] - sh.z[k]) * (sh.z[j] - sh.z[k]);
      sh.r[j] = std::sqrt(sh.numerator.eval_c(sh.z[j]) / prod);
    }
    auto ch = build_cover(sh, Tolerances{});
    CycleSpec ac = *a;
    Cplx y0 = std::sqrt(ch.ctx->Q.eval_c(ac.path.pts[0]));
    if (std::abs(y0 - a->start_value) > std::abs(y0 + a->start_value)) y0 = -y0;
    ac.start_value = y0;
    return integrate_differential(ch, QextElem<Cplx>::v(ch.ctx), ac, 1e-12).value;
  };
  for (int K : {1, 2}) {
    std::vector<double> hs{0.2, 0.1, 0.05}, errs;
    for (double hb : hs) {
      Cplx partial = 0;
      double hp = 1;
      for (int k = 0; k <= K; ++k) {
        partial += hp * terms[size_t(k)].value;
        hp *= hb;
      }
      errs.push_back(std::abs(partial - direct(hb)));
    }
    double slope = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
    CHECK(slope == doctest::Approx(K + 1).epsilon(0.10));
  }
}

TEST_CASE("regularized pole-to-pole integrals") {
  auto cov = build_cover(four_spec(), Tolerances{});
  auto basis = homology_basis(cov);
  auto v = QextElem<Cplx>::v(cov.ctx);
  const CycleSpec* kap = find_cycle(basis, CycleSpec::Label::K, 1);
  REQUIRE(kap);

  SUBCASE("no-op on integrands regular at the punctures") {
    // Q1/v with Q1 = 1/prod(x-z): double zeros of 1/v at punctures win
    RatFunc<Cplx> Q1(Poly<Cplx>::one(), cov.spec.pole_poly());
    auto e = QextElem<Cplx>::odd(Q1 / cov.ctx->Q, cov.ctx);
    auto reg = regularized_pole_integral(cov, e, *kap, 1e-10);
    auto plain = integrate_differential(cov, e, *kap, 1e-10);  // weight 1/2
    CHECK(std::abs(reg.value - 2.0 * plain.value) < 1e-7 * (1.0 + std::abs(reg.value)));
  }

  SUBCASE("cutoff independence for v itself") {
    auto r1 = regularized_pole_integral(cov, v, *kap, 1e-10, 0.3);
    auto r2 = regularized_pole_integral(cov, v, *kap, 1e-10, 0.15);
    auto r3 = regularized_pole_integral(cov, v, *kap, 1e-10, 0.45);
    CHECK(std::abs(r1.value - r2.value) < 1e-7 * (1.0 + std::abs(r1.value)));
    CHECK(std::abs(r1.value - r3.value) < 1e-7 * (1.0 + std::abs(r1.value)));
    CHECK(std::abs(r1.value) > 1e-3);
  }

  SUBCASE("singularity worse than a simple pole is rejected") {
    Poly<Cplx> lin = Poly<Cplx>::linear(cov.spec.z[1]);
    auto bad = QextElem<Cplx>::even(RatFunc<Cplx>(Poly<Cplx>::one(), lin * lin), cov.ctx);
    CHECK_THROWS(regularized_pole_integral(cov, bad, *kap, 1e-10));
  }
}
