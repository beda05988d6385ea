#pragma once
// Integration of differentials (a + b y) dx over cycles on the cover:
// period coordinates, regularized pole-to-pole integrals, binomial expansion.

#include "qdw/cover.hpp"
#include "qdw/local.hpp"

namespace qdw {

struct IntegralResult {
  Cplx value{};
  double err = 0;
};

struct PeriodChart {
  std::vector<Cplx> A, B;          // one per a-/b-cycle
  std::vector<Cplx> t_periods;     // one per puncture
  std::vector<double> A_err, B_err, t_err;
};

// weighted integral of the differential over the cycle (the cycle's weight is
// part of the chain, so t-loops give the full 2 pi i residue and kappa arcs
// give half the pole-connecting contour)
IntegralResult integrate_differential(const SpectralCover& cover, const QextElem<Cplx>& elem,
                                      const CycleSpec& cycle, double tol);

PeriodChart period_chart(const SpectralCover& cover, const std::vector<CycleSpec>& basis,
                         double tol);

// Integral of elem over the full pole-connecting contour of kappa_j (from the
// z_j lift with residue -r_j to the one with +r_j), with the logarithmic
// divergence at both ends removed in the exponential chart zeta (v = r
// dzeta/zeta there). Endpoint behaviour at worst a simple pole.
IntegralResult regularized_pole_integral(const SpectralCover& cover, const QextElem<Cplx>& elem,
                                         const CycleSpec& kappa, double tol,
                                         double cutoff_frac = 0.3);

// coefficients of sqrt(Q + hbar Qtilde) dx integrated over the cycle,
// expanded in hbar: term k = binom(1/2,k) * cycle-integral of Qtilde^k / v^(2k-1)
std::vector<IntegralResult> binomial_period_expansion(const SpectralCover& cover,
                                                      const RatFunc<Cplx>& Qtilde,
                                                      const CycleSpec& cycle, int K, double tol);

}  // namespace qdw
