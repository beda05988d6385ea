#pragma once
// The double cover y^2 = Q of the punctured sphere: turning points, branch
// cuts, reference sheet, homology cycles and intersection numbers.

#include <array>
#include <string>

#include "qdw/geom.hpp"
#include "qdw/qext.hpp"

namespace qdw {

// numerator polynomial taking the value r_j^2 * prod_{k!=j}(z_j - z_k)^2 at
// each puncture (so Q = P / prod (x-z_j)^2 has biresidue r_j^2), plus the free
// part R(x) * prod(x - z_j). deg R <= n-4 keeps infinity regular.
template <class F>
Poly<F> biresidue_numerator(const std::vector<F>& z, const std::vector<F>& r, const Poly<F>& R) {
  size_t n = z.size();
  Poly<F> P, D = Poly<F>::one();
  for (auto& zj : z) D = D * Poly<F>::linear(zj);
  for (size_t j = 0; j < n; ++j) {
    F prod = FieldTraits<F>::from_int(1);
    Poly<F> L = Poly<F>::one();
    for (size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      prod *= (z[j] - z[k]) * (z[j] - z[k]);
      L = (FieldTraits<F>::from_int(1) / (z[j] - z[k])) * (L * Poly<F>::linear(z[k]));
    }
    P = P + (r[j] * r[j] * prod) * L;
  }
  return P + R * D;
}

template <class F>
struct QuadDiffSpecT {
  std::vector<F> z, r;    // punctures and residue roots
  Poly<F> numerator;      // P, degree exactly 2n-4
  RatFunc<F> Q1;          // optional secondary differential (zero if unused)

  int n() const { return int(z.size()); }
  Poly<F> pole_poly() const {
    Poly<F> D = Poly<F>::one();
    for (auto& zj : z) D = D * Poly<F>::linear(zj);
    return D;
  }
  RatFunc<F> Q() const {
    Poly<F> D = pole_poly();
    return RatFunc<F>(numerator, D * D);
  }
  std::shared_ptr<QContext<F>> context() const {
    std::vector<Poly<F>> factors;
    factors.push_back(numerator);
    for (auto& zj : z) factors.push_back(Poly<F>::linear(zj));
    return std::make_shared<QContext<F>>(Q(), std::move(factors));
  }

  static QuadDiffSpecT make(std::vector<F> z, std::vector<F> r, const Poly<F>& R,
                            RatFunc<F> Q1 = {}) {
    QuadDiffSpecT s;
    s.numerator = biresidue_numerator(z, r, R);
    s.z = std::move(z);
    s.r = std::move(r);
    s.Q1 = std::move(Q1);
    return s;
  }

  QuadDiffSpecT<Cplx> to_cplx() const {
    QuadDiffSpecT<Cplx> s;
    for (auto& x : z) s.z.push_back(FieldTraits<F>::to_cplx(x));
    for (auto& x : r) s.r.push_back(FieldTraits<F>::to_cplx(x));
    s.numerator = numerator.to_cplx();
    s.Q1 = Q1.to_cplx();
    return s;
  }
};

using QuadDiffSpec = QuadDiffSpecT<Cplx>;

struct Tolerances {
  double quad = 1e-11;        // quadrature error target
  double newton = 1e-10;      // moduli solves
  double clearance = 0.04;    // path clearance, relative to feature scale
  double simplicity = 1e-6;   // |P'(x_i)| floor, relative
  int series_order = 24;
};

struct CycleSpec {
  enum class Label { A, B, T, K };
  Label label = Label::T;
  int index = 0;
  Polyline path;
  int start_sheet = +1;
  Cplx start_value{};  // y at the tracking start vertex (see start_vertex())
  double weight = 1.0; // 1/sqrt(2) for a/b, 1 for t, 1/2 for the kappa arc
  bool closed = true;

  // kappa arcs begin at a puncture where y blows up: track from the first
  // interior vertex instead
  size_t start_vertex() const { return label == Label::K ? 1 : 0; }
  std::string name() const;
};

struct SpectralCover {
  QuadDiffSpec spec;
  Tolerances tol;
  std::vector<Cplx> turning_points;           // sorted by (Re, Im)
  std::vector<std::array<int, 2>> cuts;       // non-crossing pairing, straight cuts
  Cplx base_point{};
  Cplx base_value{};                          // reference branch of sqrt(Q)
  std::shared_ptr<const QContext<Cplx>> ctx;

  int n() const { return spec.n(); }
  int genus() const { return n() - 3; }
  std::vector<Cplx> features() const;         // punctures + turning points
  double feature_scale() const;
  double feature_separation() const;          // min pairwise feature distance
  // clearance capped by the tightest feature gap so routes can thread clusters
  double abs_clearance() const {
    return std::min(tol.clearance * feature_scale(), 0.25 * feature_separation());
  }
  Cplx cut_a(int k) const { return turning_points[size_t(cuts[size_t(k)][0])]; }
  Cplx cut_b(int k) const { return turning_points[size_t(cuts[size_t(k)][1])]; }

  // continuation of the reference branch from the base point to p
  Cplx ref_value(const Cplx& p) const;
};

SpectralCover build_cover(const QuadDiffSpec& spec, const Tolerances& tol);

std::vector<CycleSpec> homology_basis(const SpectralCover& cover);

// analytic continuation of sqrt(R) along a polyline; returns the values at the
// vertices (adaptively refined in between)
Cplx continue_sqrt(const RatFunc<Cplx>& R, const Cplx& from, const Cplx& to, Cplx y);
std::vector<Cplx> sheet_continuation(const RatFunc<Cplx>& R, const Polyline& path, Cplx start);

// signed transversal crossings where the lifted sheets agree, times the cycle
// weights (a-b pairs meet in +1/2 under this normalization)
double intersection_number(const SpectralCover& cover, const CycleSpec& c1, const CycleSpec& c2);

std::vector<Cplx> polynomial_roots(const Poly<Cplx>& p);

}  // namespace qdw
