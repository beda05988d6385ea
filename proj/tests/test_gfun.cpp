#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdw/gfun.hpp"

using namespace qdw;

namespace {

ModuliPoint four_point() {
  std::vector<Cplx> z{{-1, 0}, {1, 0}, {0, 2}, {0.4, -1.2}};
  std::vector<Cplx> r{{0.8, 0}, {1.2, 0}, {0.6, 0}, {1, 0}};
  return make_moduli_point(z, r, Poly<Cplx>::constant(Cplx(-2, 4)), {}, 1e-9);
}

FamilyFn const_family(Cplx c) {
  return [c](const ModuliPoint& m) {
    return RatFunc<Cplx>(Poly<Cplx>::constant(c), m.spec.pole_poly());
  };
}

CVec unit_dir(int g, int k) {
  CVec e = CVec::Zero(2 * g);
  e[k] = 1.0;
  return e;
}

// a- and b-periods of the six differentials entering the gradient displays
struct Periods {
  // rows: v, Q1/v, Q1^2/v^3, Q1^3/v^5, qv, qQ1/v; columns: cycles
  std::vector<std::vector<Cplx>> a, b;
};

Periods all_periods(const ModuliPoint& m, const FamilyFn& fam) {
  RatFunc<Cplx> Q1 = fam(m);
  const RatFunc<Cplx>& Q = m.cover.ctx->Q;
  auto q = q_rational(m.spec.numerator, m.spec.pole_poly());
  std::vector<QextElem<Cplx>> elems = {
      QextElem<Cplx>::v(m.cover.ctx),
      QextElem<Cplx>::odd(Q1 / Q, m.cover.ctx),
      QextElem<Cplx>::odd((Q1 * Q1) / (Q * Q), m.cover.ctx),
      QextElem<Cplx>::odd((Q1 * Q1 * Q1) / (Q * Q * Q), m.cover.ctx),
      QextElem<Cplx>::odd(q, m.cover.ctx),
      QextElem<Cplx>::odd(q * (Q1 / Q), m.cover.ctx),
  };
  Periods out;
  out.a.assign(elems.size(), {});
  out.b.assign(elems.size(), {});
  for (size_t e = 0; e < elems.size(); ++e) {
    for (int j = 0; j < m.g(); ++j) {
      const CycleSpec *ca = nullptr, *cb = nullptr;
      for (auto& c : m.basis) {
        if (c.label == CycleSpec::Label::A && c.index == j) ca = &c;
        if (c.label == CycleSpec::Label::B && c.index == j) cb = &c;
      }
      REQUIRE(ca);
      REQUIRE(cb);
      out.a[e].push_back(integrate_differential(m.cover, elems[e], *ca, 1e-8).value);
      out.b[e].push_back(integrate_differential(m.cover, elems[e], *cb, 1e-8).value);
    }
  }
  return out;
}

// <oint w1, delta oint w2> along the move pp<-p->pm
Cplx pairing(const Periods& c0, const Periods& cp, const Periods& cm, double eps, int w1,
             int w2) {
  Cplx s = 0;
  for (size_t j = 0; j < c0.a[0].size(); ++j) {
    Cplx da2 = (cp.a[size_t(w2)][j] - cm.a[size_t(w2)][j]) / (2 * eps);
    Cplx db2 = (cp.b[size_t(w2)][j] - cm.b[size_t(w2)][j]) / (2 * eps);
    s += c0.b[size_t(w1)][j] * da2 - c0.a[size_t(w1)][j] * db2;
  }
  return s;
}

}  // namespace

TEST_CASE("self-checked q and two-route turning residues") {
  auto p = four_point();
  auto q = q_function(p.cover);  // throws if the Schwarzian cross-check fails
  CHECK(!q.num.is_zero());
  auto fam = const_family(Cplx(0.7, 0.1));
  for (auto& x : p.cover.turning_points) {
    double gap = 1;
    turning_residue(p.cover, fam(p), x, &gap);
    CHECK(gap < 1e-10);
  }
}

TEST_CASE("puncture regularity of qv + v/(4r^2)") {
  auto p = four_point();
  auto q = q_rational(p.spec.numerator, p.spec.pole_poly());
  for (size_t j = 0; j < p.z.size(); ++j) {
    auto w = QextElem<Cplx>::odd(q + RatFunc<Cplx>::constant(1.0 / (4.0 * p.r[j] * p.r[j])),
                                 p.cover.ctx);
    for (int sheet : {+1, -1}) {
      auto ls = local_series(w, p.z[j], sheet, ChartKind::Linear, 2);
      CHECK(std::abs(ls.residue()) < 1e-9);
    }
  }
}

TEST_CASE("structure of the generating terms in the deformation") {
  auto p = four_point();
  Cplx c(0.7, 0.1);
  auto zero = const_family(Cplx(0));
  auto r0 = gterms_report(p, zero, p, 1);
  CHECK(std::abs(r0.G_m1) == 0.0);
  CHECK(std::abs(r0.G_1) == 0.0);

  auto r1 = gterms_report(p, const_family(c), p, 1);
  auto r2 = gterms_report(p, const_family(2.0 * c), p, 1);
  auto r3 = gterms_report(p, const_family(3.0 * c), p, 1);
  // first term linear, second-term extra quadratic
  CHECK(std::abs(2.0 * r1.G_m1 - r2.G_m1) < 1e-7);
  CHECK(std::abs(4.0 * (r1.G_0 - r0.G_0) - (r2.G_0 - r0.G_0)) < 1e-7);
  // third term = linear + cubic piece; three scalings overdetermine the split
  Cplx lin = (27.0 * r1.G_1 - r3.G_1) / 24.0;
  Cplx cub = r1.G_1 - lin;
  CHECK(std::abs(2.0 * lin + 8.0 * cub - r2.G_1) < 1e-7);
}

TEST_CASE("finite-difference gradients match the defining one-forms") {
  auto p = four_point();
  auto fam = const_family(Cplx(0.7, 0.1));
  double eps = 1e-3 * chart_scale(p);
  CVec c0 = chart_vector(p);
  auto theta = theta_form(p, fam(p));
  auto perio0 = all_periods(p, fam);
  Cplx pi_i(0, M_PI);

  for (int k : {0, 1}) {
    CVec dir = unit_dir(p.g(), k);
    auto pp = moduli_move(p, c0 + eps * dir);
    auto pm = moduli_move(p, c0 - eps * dir);
    auto repp = gterms_report(pp, fam, p, 1);
    auto repm = gterms_report(pm, fam, p, 1);
    auto periop = all_periods(pp, fam);
    auto periom = all_periods(pm, fam);
    auto pair = [&](int w1, int w2) { return pairing(perio0, periop, periom, eps, w1, w2); };
    enum { V = 0, W1 = 1, W2 = 2, W3 = 3, QV = 4, QW = 5 };

    // delta G_{-1} = Theta + delta[sum (pi i r_j/2) int Q1/v]
    {
      Cplx fd = (repp.G_m1 - repm.G_m1) / (2 * eps);
      auto regsum = [&](const GTermsReport& r) {
        Cplx s = 0;
        size_t j = 0;
        for (auto& be : r.breakdown)
          if (be.label.rfind("int[Q1/v]", 0) == 0) s += 0.5 * pi_i * p.r[j++] * be.value;
        return s;
      };
      Cplx want = theta.apply(dir) + (regsum(repp) - regsum(repm)) / (2 * eps);
      CHECK(std::abs(fd - want) < 1e-4 * (1.0 + std::abs(want)));
    }

    // delta G_0 via the pairing display
    {
      Cplx fd = (repp.G_0 - repm.G_0) / (2 * eps);
      Cplx want = 0.25 * pair(W1, W1) - 0.125 * pair(V, W2) - 0.125 * pair(W2, V) -
                  0.5 * pair(V, QV) - 0.5 * pair(QV, V);
      CHECK(std::abs(fd - want) < 1e-4 * (1.0 + std::abs(want)));
    }

    // delta G_1 via the pairing display
    {
      Cplx g1p = gterms_report(pp, fam, pp, 1).G_1;
      Cplx g1m = gterms_report(pm, fam, pm, 1).G_1;
      Cplx fd = (g1p - g1m) / (2 * eps);
      Cplx want = -1.0 / 16 * (pair(W2, W1) + pair(W1, W2)) +
                  1.0 / 16 * (pair(V, W3) + pair(W3, V)) -
                  0.25 * (pair(W1, QV) + pair(QV, W1)) + 0.25 * (pair(V, QW) + pair(QW, V));
      CHECK(std::abs(fd - want) < 1e-4 * (1.0 + std::abs(want)));
    }
  }
}
