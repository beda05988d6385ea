#include "qdw/ode.hpp"

#include <boost/numeric/odeint.hpp>

namespace qdw {

namespace {

using State = std::array<Cplx, 4>;  // two columns of (phi, hbar phi')

struct SegmentSystem {
  const RatFunc<Cplx>* Q;
  const RatFunc<Cplx>* Q1;
  double hbar;
  Cplx a, d;  // x(t) = a + t d

  void operator()(const State& y, State& dy, double t) const {
    Cplx x = a + t * d;
    Cplx u = Q1->is_zero() ? Cplx(0) : Q1->eval(x);
    u += Q->eval(x) / hbar;  // hbar * (Q1/hbar + Q/hbar^2)
    dy[0] = d * y[1] / hbar;
    dy[1] = d * u * y[0];
    dy[2] = d * y[3] / hbar;
    dy[3] = d * u * y[2];
  }
};

}  // namespace

Mat2 transport(const RatFunc<Cplx>& Q, const RatFunc<Cplx>& Q1, double hbar,
               const Polyline& path, double tol, const std::vector<Cplx>& punctures,
               double clearance, double wronskian_tol) {
  if (path.pts.size() < 2) throw std::invalid_argument("transport: need a path");
  if (hbar <= 0) throw std::invalid_argument("transport: hbar must be positive");
  for (auto& z : punctures)
    if (path.min_dist(z) < clearance) throw std::runtime_error("transport: clearance violation");

  namespace odeint = boost::numeric::odeint;
  State y{Cplx(1), Cplx(0), Cplx(0), Cplx(1)};
  auto stepper = odeint::make_controlled(tol, tol,
                                         odeint::runge_kutta_fehlberg78<State>());
  for (size_t i = 0; i + 1 < path.pts.size(); ++i) {
    SegmentSystem sys{&Q, &Q1, hbar, path.pts[i], path.pts[i + 1] - path.pts[i]};
    if (std::abs(sys.d) == 0) continue;
    odeint::integrate_adaptive(stepper, sys, y, 0.0, 1.0, 0.05);
  }
  Mat2 M;
  M << y[0], y[2], y[1], y[3];
  double drift = std::abs(M.determinant() - Cplx(1));
  if (drift > wronskian_tol) throw std::runtime_error("transport: Wronskian drift " +
                                                      std::to_string(drift));
  return M;
}

Mat2 transport(const QuadDiffSpec& spec, double hbar, const Polyline& path, double tol,
               double clearance) {
  return transport(spec.Q(), spec.Q1, hbar, path, tol, spec.z, clearance);
}

Cplx fuchsian_exponent(const Cplx& r, double hbar) {
  return 0.5 + std::sqrt(0.25 + (r / hbar) * (r / hbar));
}

namespace {

double loop_radius(const SpectralCover& cover, int j) {
  const auto& z = cover.spec.z;
  double d = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < z.size(); ++k)
    if (int(k) != j) d = std::min(d, std::abs(z[k] - z[size_t(j)]));
  return 0.35 * d;
}

std::pair<Cplx, Cplx> ordered_eigenvalues(const Mat2& M, const Cplx& target) {
  Eigen::ComplexEigenSolver<Mat2> es(M, false);
  Cplx m1 = es.eigenvalues()[0], m2 = es.eigenvalues()[1];
  if (std::abs(m2 - target) < std::abs(m1 - target)) std::swap(m1, m2);
  return {m1, m2};
}

}  // namespace

std::pair<Cplx, Cplx> puncture_spectrum(const SpectralCover& cover, double hbar, int j,
                                        double tol) {
  double rho = loop_radius(cover, j);
  Polyline loop = circle_path(cover.spec.z[size_t(j)], rho, 32);
  Mat2 M = transport(cover.spec, hbar, loop, tol, 0.5 * rho);
  Cplx target = std::exp(2.0 * M_PI * Cplx(0, 1) * fuchsian_exponent(cover.spec.r[size_t(j)], hbar));
  return ordered_eigenvalues(M, target);
}

MonodromyRep monodromy_rep(const SpectralCover& cover, double hbar, double tol) {
  const auto& z = cover.spec.z;
  Cplx c = 0;
  for (auto& zj : z) c += zj;
  c /= double(z.size());
  double scale = cover.feature_scale();
  MonodromyRep rep;
  rep.base = c - Cplx(0, 3.0) * scale;
  rep.hbar = hbar;

  // lassos ordered by the angle of the puncture as seen from the base point,
  // so their concatenation is a contractible loop around everything
  for (int j = 0; j < int(z.size()); ++j) rep.order.push_back(j);
  std::sort(rep.order.begin(), rep.order.end(), [&](int a, int b) {
    return std::arg(z[size_t(a)] - rep.base) < std::arg(z[size_t(b)] - rep.base);
  });

  double clr = cover.abs_clearance();
  rep.product = Mat2::Identity();
  for (int j : rep.order) {
    double rho = loop_radius(cover, j);
    Cplx zj = z[size_t(j)];
    Polyline leg = route_with_detours(rep.base, zj + rho * (rep.base - zj) / std::abs(rep.base - zj),
                                      z, std::min(clr, 0.5 * rho));
    Cplx entry = leg.pts.back();
    Polyline circ = circle_path(zj, rho, 32);
    // rotate the circle so it starts at the leg's entry point
    double th0 = std::arg(entry - zj);
    Polyline loop;
    for (int i = 0; i <= 32; ++i) {
      double th = th0 + 2 * M_PI * double(i) / 32;
      loop.pts.push_back(zj + rho * Cplx(std::cos(th), std::sin(th)));
    }
    loop.pts.back() = loop.pts.front();
    Mat2 L = transport(cover.spec, hbar, leg, tol, 0.0);
    Mat2 C = transport(cover.spec, hbar, loop, tol, 0.5 * rho);
    rep.loops.push_back(L.inverse() * C * L);
    rep.product = rep.loops.back() * rep.product;
  }
  rep.relation_defect = std::min((rep.product - Mat2::Identity()).norm(),
                                 (rep.product + Mat2::Identity()).norm());
  return rep;
}

RhoFit rho_scaling_fit(const SpectralCover& cover, const RatFunc<Cplx>& Q1, int j,
                       const std::vector<double>& grid, int N, double tol, double quad_tol) {
  if (grid.size() < 4) throw std::invalid_argument("rho_scaling_fit: need >= 4 grid points");
  RhoFit fit;
  fit.grid = grid;

  auto series = riccati_recursion(cover.spec, Q1, std::max(N, 1));
  auto basis = homology_basis(cover);
  const CycleSpec* tj = nullptr;
  for (auto& cyc : basis)
    if (cyc.label == CycleSpec::Label::T && cyc.index == j) tj = &cyc;
  if (!tj) throw std::runtime_error("rho_scaling_fit: t-cycle not found");
  for (int k = -1; k <= N; ++k)
    fit.coeffs.push_back(
        integrate_differential(cover, vk_differential(series, k), *tj, quad_tol).value);

  fit.residual.resize(grid.size());
  fit.series.resize(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(grid.size()); ++i) {
    double hb = grid[size_t(i)];
    Cplx sum = 0;
    for (int k = -1; k <= N; ++k) sum += std::pow(hb, k) * fit.coeffs[size_t(k + 1)];
    Cplx m = puncture_spectrum(cover, hb, j, tol).first;
    // log m is defined mod 2 pi i and the series branch mod pi i: compare
    // m against e^{series} and reduce the gap mod pi i
    Cplx d = std::log(m * std::exp(-sum));
    d -= Cplx(0, M_PI) * std::round(d.imag() / M_PI);
    fit.series[size_t(i)] = sum;
    fit.residual[size_t(i)] = d;
  }

  // least-squares slope of log|residual| vs log hbar
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    double x = std::log(grid[i]), y = std::log(std::abs(fit.residual[i]));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double n = double(grid.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace qdw
