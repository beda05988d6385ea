#pragma once
// Riccati recursion for the exponent series of the second-order equation,
// odd/even splitting, the differentials v_k and Voros coefficient tables.

#include "qdw/periods.hpp"

namespace qdw {

// projective-connection term: q = (5 Q'^2 - 4 Q Q'') / (16 Q^3), written over
// the factored Q = P / D^2 so the puncture poles cancel symbolically and the
// only poles are order 3 at the turning points
template <class F>
RatFunc<F> q_rational(const Poly<F>& P, const Poly<F>& D) {
  Poly<F> dP = P.derivative(), ddP = dP.derivative();
  Poly<F> dD = D.derivative(), ddD = dD.derivative();
  Poly<F> u = dP * D - FieldTraits<F>::from_int(2) * (P * dD);       // Q' D^3
  Poly<F> w = ddP * D * D - FieldTraits<F>::from_int(4) * (dP * dD * D) -
              FieldTraits<F>::from_int(2) * (P * ddD * D) +
              FieldTraits<F>::from_int(6) * (P * dD * dD);           // Q'' D^4
  Poly<F> num = FieldTraits<F>::from_int(5) * (u * u) - FieldTraits<F>::from_int(4) * (P * w);
  Poly<F> den = FieldTraits<F>::from_int(16) * (P * P * P);
  RatFunc<F> q(num, den);
  q.reduce_by(P);
  return q;
}

template <class F>
struct WKBSeriesT {
  std::shared_ptr<const QContext<F>> ctx;
  RatFunc<F> Q1;
  RatFunc<F> p, q;                  // p = Q1/Q and the projective term
  std::vector<QextElem<F>> s;       // s[k+1] holds s_k, k = -1 .. N
  int N = 0;
  int branch = +1;

  const QextElem<F>& at(int k) const { return s[size_t(k + 1)]; }
};

using WKBSeries = WKBSeriesT<Cplx>;

// s_{-1} = 1; s_0 = p/2; s_1 = -dp/(4v) - (p^2/4 + q)/2;
// s_{k+1} = -(1/2)(d s_k / v + sum_{j+l=k, j,l>=0} s_j s_l).
// branch = -1 starts from s_{-1} = -1 (the other exponent of the same
// equation); matching orders then flips the sign of every even component.
template <class F>
WKBSeriesT<F> riccati_recursion(const QuadDiffSpecT<F>& spec, const RatFunc<F>& Q1, int N,
                                int branch = +1) {
  if (N < 1) throw std::invalid_argument("riccati_recursion: need N >= 1");
  WKBSeriesT<F> out;
  out.ctx = spec.context();
  out.Q1 = Q1;
  out.N = N;
  out.branch = branch;
  out.q = q_rational(spec.numerator, spec.pole_poly());
  out.p = Q1 / out.ctx->Q;
  F half = FieldTraits<F>::from_int(1) / FieldTraits<F>::from_int(2);
  F quarter = half * half;
  F br = FieldTraits<F>::from_int(branch);

  out.s.push_back(br * QextElem<F>::even(RatFunc<F>::one(), out.ctx));
  out.s.push_back(br * QextElem<F>::even(half * out.p, out.ctx));
  {
    auto dp_over_4v = QextElem<F>::even(quarter * out.p.derivative(), out.ctx).div_by_v();
    auto rest = QextElem<F>::even(
        half * (quarter * (out.p * out.p) + out.q), out.ctx);
    out.s.push_back(-dp_over_4v - br * rest);
  }
  for (int k = 1; k < N; ++k) {
    QextElem<F> acc = out.at(k).derivative().div_by_v();
    for (int j = 0; j <= k; ++j) acc = acc + out.at(j) * out.at(k - j);
    out.s.push_back((-(br * half)) * acc);
  }
  return out;
}

// the mu-invariant ("odd-differential generating") part of s_k: its y-free
// component, as an even element
template <class F>
QextElem<F> odd_generator(const WKBSeriesT<F>& ser, int k) {
  return QextElem<F>::even(ser.at(k).a, ser.ctx);
}

template <class F>
QextElem<F> even_generator(const WKBSeriesT<F>& ser, int k) {
  return QextElem<F>::odd(ser.at(k).b, ser.ctx);
}

// v_k = (odd generator of s_k) * v, a mu-antisymmetric differential
template <class F>
QextElem<F> vk_differential(const WKBSeriesT<F>& ser, int k) {
  return odd_generator(ser, k).times_v();
}

template <class F>
WKBSeriesT<Cplx> to_cplx(const WKBSeriesT<F>& ser,
                         std::shared_ptr<const QContext<Cplx>> ctx) {
  WKBSeriesT<Cplx> out;
  out.ctx = ctx;
  out.Q1 = ser.Q1.to_cplx();
  out.p = ser.p.to_cplx();
  out.q = ser.q.to_cplx();
  out.N = ser.N;
  out.branch = ser.branch;
  for (auto& e : ser.s)
    out.s.push_back(QextElem<Cplx>(e.a.to_cplx(), e.b.to_cplx(), ctx));
  return out;
}

struct VorosTable {
  std::vector<std::string> cycle_names;
  std::vector<std::vector<IntegralResult>> entries;   // [cycle][k+1], k=-1..N
  std::vector<std::vector<Cplx>> t_residue_check;     // per t-cycle, 2 pi i res
};

VorosTable voros_table(const SpectralCover& cover, const WKBSeries& series,
                       const std::vector<CycleSpec>& basis, double tol);

// residues of v_k at every turning point (float evaluation; they vanish
// structurally because v_k is mu-antisymmetric and the zeros of Q are simple)
std::vector<Cplx> turning_point_residues(const SpectralCover& cover, const WKBSeries& series,
                                         int k);

// max |ds + s^2 v + q v - p v / hbar - v / hbar^2| over the sample points,
// with s truncated at order N; expected O(hbar^N)
double riccati_residual(const WKBSeries& series, const std::vector<Cplx>& points, double hbar);

}  // namespace qdw
