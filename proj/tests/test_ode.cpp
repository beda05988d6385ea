#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdw/ode.hpp"

using namespace qdw;

namespace {

SpectralCover four_point_cover() {
  std::vector<Cplx> z{{-1, 0}, {1, 0}, {0, 2}, {0.4, -1.2}};
  std::vector<Cplx> r{{0.8, 0}, {1.2, 0}, {0.6, 0}, {1, 0}};
  auto spec = QuadDiffSpec::make(z, r, Poly<Cplx>::constant(Cplx(-2, 4)));
  return build_cover(spec, Tolerances{});
}

}  // namespace

TEST_CASE("constant potential reproduces the exponential matrix") {
  Cplx c(0.3, 0.7);
  auto Q = RatFunc<Cplx>::constant(c);
  RatFunc<Cplx> zero;
  double hbar = 0.2;
  Cplx a(0.1, -0.4), b(1.3, 0.9), dl = b - a;
  Polyline seg;
  seg.pts = {a, b};
  Mat2 M = transport(Q, zero, hbar, seg);

  Cplx mu = std::sqrt(c) / hbar;
  Mat2 W;
  W << std::cosh(mu * dl), std::sinh(mu * dl) / (hbar * mu),
       hbar * mu * std::sinh(mu * dl), std::cosh(mu * dl);
  CHECK((M - W).norm() < 1e-10);
}

TEST_CASE("wronskian constancy and the flow property") {
  auto cov = four_point_cover();
  double hbar = 0.15;
  Polyline loop = circle_path(Cplx(0.1, 0.3), 0.45, 20);
  Mat2 M = transport(cov.spec, hbar, loop, 1e-12);
  CHECK(std::abs(M.determinant() - Cplx(1)) < 1e-9);

  Polyline p1, p2, p12;
  p1.pts = {Cplx(-0.3, -0.5), Cplx(0.5, 0.6)};
  p2.pts = {Cplx(0.5, 0.6), Cplx(1.6, 0.9)};
  p12.pts = {p1.pts[0], p1.pts[1], p2.pts[1]};
  Mat2 A = transport(cov.spec, hbar, p1, 1e-12);
  Mat2 B = transport(cov.spec, hbar, p2, 1e-12);
  Mat2 AB = transport(cov.spec, hbar, p12, 1e-12);
  CHECK((AB - B * A).norm() < 1e-9);

  Polyline bad;
  bad.pts = {Cplx(-2, 0), Cplx(2, 0)};  // runs through the puncture at -1
  CHECK_THROWS(transport(cov.spec, hbar, bad, 1e-12, 0.05));
}

TEST_CASE("fuchsian exponent") {
  double hbar = 0.35;
  Cplx lam = fuchsian_exponent(2.0 * hbar, hbar);  // r/hbar = 2
  CHECK(std::abs(lam - (1.0 + std::sqrt(17.0)) / 2.0) < 1e-14);
}

TEST_CASE("puncture eigenvalues match the fuchsian exponents") {
  auto cov = four_point_cover();
  double hbar = 0.1;
  for (int j = 0; j < cov.n(); ++j) {
    auto [m, mi] = puncture_spectrum(cov, hbar, j);
    CHECK(std::abs(m * mi - Cplx(1)) < 1e-9);
    Cplx lam = fuchsian_exponent(cov.spec.r[size_t(j)], hbar);
    Cplx want = std::exp(2.0 * M_PI * Cplx(0, 1) * lam);
    CHECK(std::abs(m - want) < 1e-6 * std::abs(want));
    CHECK(std::abs(mi - 1.0 / want) < 1e-6 * std::abs(1.0 / want));
  }
}

TEST_CASE("lasso product relation and base-point independence of traces") {
  auto cov = four_point_cover();
  double hbar = 0.12;
  auto rep = monodromy_rep(cov, hbar);
  REQUIRE(rep.loops.size() == size_t(cov.n()));
  CHECK(rep.relation_defect < 1e-6);
  for (size_t i = 0; i < rep.loops.size(); ++i) {
    CHECK(std::abs(rep.loops[i].determinant() - Cplx(1)) < 1e-8);
    // a lasso is conjugate to the tight loop, so the traces must agree
    int j = rep.order[i];
    auto [m, mi] = puncture_spectrum(cov, hbar, j);
    CHECK(std::abs(rep.loops[i].trace() - (m + mi)) < 1e-8 * std::max(1.0, std::abs(m + mi)));
  }
}

TEST_CASE("eigenvalue log against the period series over an hbar grid") {
  auto cov = four_point_cover();
  RatFunc<Cplx> zero;
  std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
  Cplx r0 = cov.spec.r[0];
  Cplx twopii(0, 2 * M_PI);

  auto f2 = rho_scaling_fit(cov, zero, 0, grid, 2);
  CHECK(std::abs(f2.coeffs[0] - twopii * r0) < 1e-8 * std::abs(twopii * r0));
  CHECK(std::abs(f2.coeffs[1]) < 1e-10);                       // order 0 has no t-residue
  CHECK(std::abs(f2.coeffs[2] - twopii / (8.0 * r0)) < 1e-8);  // from res(qv) = -1/(4r)
  CHECK(std::abs(f2.coeffs[3]) < 1e-10);                       // order 2 has no t-residue
  CHECK(f2.slope == doctest::Approx(3.0).epsilon(0.15));

  // the even orders have vanishing t-periods (the loop eigenvalue is an odd
  // series in hbar apart from the fixed pi i shift), so truncating after
  // order 1 already leaves an O(hbar^3) tail: the order-1 and order-2 fits
  // share their residuals and both sit on slope 3, not slope 2
  auto f1 = rho_scaling_fit(cov, zero, 0, grid, 1);
  CHECK(f1.slope == doctest::Approx(3.0).epsilon(0.15));
  for (size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(f1.residual[i] - f2.residual[i]) < 1e-9);
}
