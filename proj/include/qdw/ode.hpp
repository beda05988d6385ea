#pragma once
// Direct numerical monodromy of phi'' = (Q1/hbar + Q/hbar^2) phi on the
// punctured plane: fundamental-matrix transport along polylines, puncture
// eigenvalues against the Fuchsian exponent, and hbar-scaling fits of the
// loop eigenvalues against the period series of the v_k.

#include <Eigen/Dense>

#include "qdw/wkb.hpp"

namespace qdw {

using Mat2 = Eigen::Matrix2cd;

// transport of the scaled frame (phi, hbar phi') along the polyline, as the
// matrix sending the frame at path.front() to the frame at path.back().
// Throws when the path comes within `clearance` of a puncture of Q or when
// the Wronskian drifts by more than wronskian_tol.
Mat2 transport(const RatFunc<Cplx>& Q, const RatFunc<Cplx>& Q1, double hbar,
               const Polyline& path, double tol = 1e-12,
               const std::vector<Cplx>& punctures = {}, double clearance = 0.0,
               double wronskian_tol = 1e-8);

Mat2 transport(const QuadDiffSpec& spec, double hbar, const Polyline& path, double tol = 1e-12,
               double clearance = 0.0);

// Fuchsian exponent at a puncture with residue root r: the root of
// lambda(lambda - 1) = (r/hbar)^2 with lambda = 1/2 + sqrt(1/4 + (r/hbar)^2)
// (principal square root; the other root is 1 - lambda)
Cplx fuchsian_exponent(const Cplx& r, double hbar);

// eigenvalue pair (m, 1/m) of a tight counterclockwise loop around z_j,
// ordered so the first entry is the one closer to e^{2 pi i lambda_j}
std::pair<Cplx, Cplx> puncture_spectrum(const SpectralCover& cover, double hbar, int j,
                                        double tol = 1e-12);

struct MonodromyRep {
  Cplx base{};
  double hbar = 0;
  std::vector<int> order;          // puncture indices in loop order around the base
  std::vector<Mat2> loops;         // lasso matrices, same order
  Mat2 product;                    // ordered product of the loops
  double relation_defect = 0;      // min over signs of ||product -+ I||
};

// lassos from a common distant base point, one per puncture, ordered by angle
MonodromyRep monodromy_rep(const SpectralCover& cover, double hbar, double tol = 1e-12);

struct RhoFit {
  std::vector<double> grid;        // hbar values
  std::vector<Cplx> coeffs;        // t-cycle periods of v_k, k = -1 .. N
  std::vector<Cplx> series;        // partial sums at each hbar
  std::vector<Cplx> residual;      // log m - series, reduced mod pi i
  double slope = 0;                // log-log fit of |residual| against hbar
};

// compares log of the loop eigenvalue at z_j against sum_k hbar^k oint_{t_j} v_k;
// the branch of the log is fixed modulo pi i by reduction of the difference
RhoFit rho_scaling_fit(const SpectralCover& cover, const RatFunc<Cplx>& Q1, int j,
                       const std::vector<double>& grid, int N, double tol = 1e-12,
                       double quad_tol = 1e-9);

}  // namespace qdw
