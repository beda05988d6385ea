#include "qdw/wkb.hpp"

#include <cmath>

namespace qdw {

VorosTable voros_table(const SpectralCover& cover, const WKBSeries& series,
                       const std::vector<CycleSpec>& basis, double tol) {
  VorosTable out;
  for (auto& c : basis) {
    if (c.label == CycleSpec::Label::K) continue;
    out.cycle_names.push_back(c.name());
    std::vector<IntegralResult> row;
    for (int k = -1; k <= series.N; ++k) {
      auto vk = vk_differential(series, k);
      row.push_back(vk.is_zero() ? IntegralResult{}
                                 : integrate_differential(cover, vk, c, tol));
    }
    if (c.label == CycleSpec::Label::T) {
      // the loop was built on the lift where v has residue +r_j; pick the chart
      // sheet with matching r_eff and cross-check every entry against 2 pi i res
      Cplx z = cover.spec.z[size_t(c.index)];
      Cplx rj = cover.spec.r[size_t(c.index)];
      auto pc = puncture_chart(*cover.ctx, z, +1, 8);
      int sheet = std::abs(pc.r_eff - rj) <= std::abs(pc.r_eff + rj) ? +1 : -1;
      std::vector<Cplx> rc;
      for (int k = -1; k <= series.N; ++k) {
        auto vk = vk_differential(series, k);
        rc.push_back(vk.is_zero() ? Cplx(0)
                                  : Cplx(0, 2 * M_PI) * residue_at(vk, z, sheet));
      }
      out.t_residue_check.push_back(std::move(rc));
    }
    out.entries.push_back(std::move(row));
  }
  return out;
}

std::vector<Cplx> turning_point_residues(const SpectralCover& cover, const WKBSeries& series,
                                         int k) {
  auto vk = vk_differential(series, k);
  std::vector<Cplx> out;
  for (auto& x : cover.turning_points)
    out.push_back(vk.is_zero() ? Cplx(0) : residue_at(vk, x, +1));
  return out;
}

double riccati_residual(const WKBSeries& series, const std::vector<Cplx>& points, double hbar) {
  std::vector<QextElem<Cplx>> ds;
  for (auto& e : series.s) ds.push_back(e.derivative());
  double worst = 0;
  for (auto& x : points) {
    Cplx y = std::sqrt(series.ctx->Q.eval_c(x));
    Cplx s = 0, dsum = 0;
    for (int k = -1; k <= series.N; ++k) {
      Cplx w = std::pow(hbar, double(k));
      s += w * series.at(k).eval_c(x, y);
      dsum += w * ds[size_t(k + 1)].eval_c(x, y);
    }
    Cplx q = series.q.eval_c(x), p = series.p.eval_c(x);
    Cplx R = dsum + (s * s + q - p / hbar - 1.0 / (hbar * hbar)) * y;
    worst = std::max(worst, std::abs(R));
  }
  return worst;
}

}  // namespace qdw
