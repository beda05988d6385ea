#pragma once
// The stratum of quadratic differentials with fixed biresidues, in period
// coordinates: gauge-fixed parametrization, Newton moves to a target chart,
// 1-forms (admissibility form, tau-function form), closedness defects, path
// integrals, and the pairing identity / generating-function checks.

#include <functional>

#include <Eigen/Dense>

#include "qdw/wkb.hpp"

namespace qdw {

using CVec = Eigen::VectorXcd;

// Gauge: z_1, z_2, z_3 pinned, r fixed; free data are the coefficients of the
// numerator part R (deg <= n-4) and the remaining punctures z_4..z_n, giving
// 2(n-3) complex parameters against the 2(n-3) chart values (A_j, B_j).
struct ModuliPoint {
  std::vector<Cplx> z, r;
  Poly<Cplx> R;
  Tolerances tol;
  double quad_tol = 1e-9;

  QuadDiffSpec spec;
  SpectralCover cover;
  std::vector<CycleSpec> basis;
  PeriodChart chart;

  int g() const { return int(z.size()) - 3; }
};

ModuliPoint make_moduli_point(std::vector<Cplx> z, std::vector<Cplx> r, Poly<Cplx> R,
                              Tolerances tol = {}, double quad_tol = 1e-9);

CVec chart_vector(const ModuliPoint& p);       // [A_1..A_g, B_1..B_g]
CVec param_vector(const ModuliPoint& p);       // [R coeffs, z_4..z_n]
double chart_scale(const ModuliPoint& p);

// Newton solve for the free parameters so the recomputed chart matches target;
// throws on non-convergence or when the move leaves the simple-zero locus.
ModuliPoint moduli_move(const ModuliPoint& p, const CVec& target);

// value of a 1-form at a point, components dual to (delta A_j, delta B_j)
struct OneFormSample {
  std::vector<Cplx> dA, dB;

  Cplx apply(const CVec& dir) const {
    Cplx s = 0;
    size_t g = dA.size();
    for (size_t j = 0; j < g; ++j) s += dA[j] * dir[long(j)] + dB[j] * dir[long(g + j)];
    return s;
  }
};

using FormFn = std::function<OneFormSample(const ModuliPoint&)>;
using FamilyFn = std::function<RatFunc<Cplx>(const ModuliPoint&)>;

// components ( +oint_{b_j} W/v, -oint_{a_j} W/v ) for a quadratic-differential
// family W with at most simple poles at the punctures
OneFormSample theta_form(const ModuliPoint& p, const RatFunc<Cplx>& W);

// differential of log tau: ( (1/12 pi i) oint_{b_j} qv, -(1/12 pi i) oint_{a_j} qv )
OneFormSample tau_one_form(const ModuliPoint& p);

// discrete circulation of the form around the parallelogram spanned by
// eps*d1, eps*d2 at p (trapezoid rule per edge); O(eps^3) for closed forms
Cplx closedness_defect(const FormFn& form, const ModuliPoint& p, const CVec& d1,
                       const CVec& d2, double eps);

// composite Simpson along the chart polyline through the given points
// (midpoints realized by moduli_move); value relative to the first point
IntegralResult integrate_form_along_path(const FormFn& form, const std::vector<ModuliPoint>& path);

// central difference with one Richardson step of a scalar function of the
// chart, along direction dir
Cplx directional_fd(const ModuliPoint& p, const CVec& dir, double eps,
                    const std::function<Cplx(const ModuliPoint&)>& fn);

// defect of the pairing identity
//   <oint w1, delta oint w2> = pi i sum_j res_{z_j^(1)}(w1) * delta int_{kappa_j} w2
//                              + <oint w1 w2 / v, delta oint v>
// contracted with the chart direction dir. Both families must be odd under the
// sheet swap; w1 regular at turning points with at worst simple poles at the
// punctures, w2 regular at the puncture lifts.
using ElemFn = std::function<QextElem<Cplx>(const ModuliPoint&)>;
Cplx lemma1_check(const ModuliPoint& p, const ElemFn& w1, const ElemFn& w2, const CVec& dir,
                  double eps);

// residual of the potential-difference identity for the deformation
// Q -> Q + hbar * Qt:
//   theta_1 - theta_0 = delta[ sum_j pi i r_j (reg int v_1 - reg int v_0) ]
//                       + hbar * Theta_(Qt)
// contracted with dir; Qt must have at most simple poles at the punctures
// (so the biresidues are unchanged).
struct HmapCheck {
  Cplx theta1, theta0;   // potentials contracted with dir
  Cplx reg_term;         // delta of the regularized-integral sum
  Cplx theta_term;       // hbar * Theta_(Qt)(dir)
  Cplx residual() const { return theta1 - theta0 - reg_term - theta_term; }
  double scale() const {
    return std::max({std::abs(theta1 - theta0), std::abs(reg_term), std::abs(theta_term)});
  }
};

HmapCheck hmap_generating_check(const ModuliPoint& p, const FamilyFn& Qt, double hbar,
                                const CVec& dir, double eps);

}  // namespace qdw
