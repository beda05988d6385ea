#pragma once
// Assembly of the three leading terms of the monodromy generating function:
// regularized pole-to-pole integrals per puncture, turning-point residues,
// and path-integrated potentials on the stratum.

#include "qdw/moduli.hpp"

namespace qdw {

// q = -S_v/(2Q) as a rational function, cross-checked at sample points
// against a finite-difference Schwarzian of the quadrature-computed flat
// coordinate; throws if the cross-check fails
RatFunc<Cplx> q_function(const SpectralCover& cover, double check_tol = 1e-7);

struct GTermEntry {
  std::string label;
  Cplx value{};
  double err = 0;
};

struct GTermsReport {
  Cplx G_m1{}, G_0{}, G_1{};
  Cplx ghat{};        // path integral of the admissibility form from the reference
  double ghat_err = 0;
  Cplx logtau{};      // path integral of the tau form from the reference
  double logtau_err = 0;
  std::vector<GTermEntry> breakdown;
};

// all terms are relative to the reference point (the potentials are defined
// only through their differentials); the path is the straight chart segment,
// subdivided `segments` times
GTermsReport gterms_report(const ModuliPoint& p, const FamilyFn& Q1, const ModuliPoint& reference,
                           int segments = 2);

Cplx g_minus1(const ModuliPoint& p, const FamilyFn& Q1, const ModuliPoint& reference,
              int segments = 2);
Cplx g_zero(const ModuliPoint& p, const FamilyFn& Q1, const ModuliPoint& reference,
            int segments = 2);
Cplx g_one(const ModuliPoint& p, const FamilyFn& Q1);

// residue of (Q1/v) / int_{x_i} v at a turning point, via the distinguished
// coordinate; also computed through the residue of qv * int Q1/v and
// cross-checked (the two routes differ by the universal factor 36/5)
Cplx turning_residue(const SpectralCover& cover, const RatFunc<Cplx>& Q1, const Cplx& x_i,
                     double* route_gap = nullptr);

}  // namespace qdw
