#include "qdw/cover.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace qdw {

std::string CycleSpec::name() const {
  const char* tag[] = {"a", "b", "t", "kappa"};
  return std::string(tag[int(label)]) + std::to_string(index + 1);
}

std::vector<Cplx> polynomial_roots(const Poly<Cplx>& p) {
  int d = p.degree();
  if (d < 1) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  Cplx lead = p.coeff(d);
  for (int i = 0; i < d; ++i) {
    C(i, d - 1) = -p.coeff(i) / lead;
    if (i > 0) C(i, i - 1) = 1.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<Cplx> roots(size_t(d), Cplx(0));
  Poly<Cplx> dp = p.derivative();
  for (int i = 0; i < d; ++i) {
    Cplx x = es.eigenvalues()(i);
    for (int it = 0; it < 6; ++it) {
      Cplx f = p.eval_c(x), g = dp.eval_c(x);
      if (std::abs(g) == 0) break;
      x -= f / g;
    }
    roots[size_t(i)] = x;
  }
  std::sort(roots.begin(), roots.end(), [](const Cplx& a, const Cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<Cplx> SpectralCover::features() const {
  std::vector<Cplx> f = spec.z;
  f.insert(f.end(), turning_points.begin(), turning_points.end());
  return f;
}

double SpectralCover::feature_separation() const {
  auto f = features();
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = i + 1; j < f.size(); ++j) d = std::min(d, std::abs(f[i] - f[j]));
  return d;
}

double SpectralCover::feature_scale() const {
  auto f = features();
  Cplx c = std::accumulate(f.begin(), f.end(), Cplx(0)) / double(f.size());
  double s = 0;
  for (auto& p : f) s = std::max(s, std::abs(p - c));
  return s > 0 ? s : 1.0;
}

// ---- sheet continuation ----------------------------------------------------

namespace {

Cplx nearest_sqrt(const RatFunc<Cplx>& R, const Cplx& x, const Cplx& ref) {
  Cplx s = std::sqrt(R.eval_c(x));
  return (std::abs(s - ref) <= std::abs(s + ref)) ? s : -s;
}

Cplx continue_rec(const RatFunc<Cplx>& R, const Cplx& a, const Cplx& b, Cplx y, int depth) {
  // accept only when both half-steps are small: a single endpoint test can
  // alias a near-pi phase rotation onto the wrong branch
  Cplx m = 0.5 * (a + b);
  Cplx ym = nearest_sqrt(R, m, y);
  Cplx yb = nearest_sqrt(R, b, ym);
  double th = 0.25;
  if (std::abs(ym - y) < th * std::max(std::abs(ym), std::abs(y)) &&
      std::abs(yb - ym) < th * std::max(std::abs(yb), std::abs(ym)))
    return yb;
  if (depth > 48) throw std::runtime_error("sheet continuation: refinement limit hit");
  Cplx ya = continue_rec(R, a, m, y, depth + 1);
  return continue_rec(R, m, b, ya, depth + 1);
}

}  // namespace

Cplx continue_sqrt(const RatFunc<Cplx>& R, const Cplx& from, const Cplx& to, Cplx y) {
  return continue_rec(R, from, to, y, 0);
}

std::vector<Cplx> sheet_continuation(const RatFunc<Cplx>& R, const Polyline& path, Cplx start) {
  std::vector<Cplx> vals{start};
  for (size_t i = 0; i + 1 < path.pts.size(); ++i)
    vals.push_back(continue_sqrt(R, path.pts[i], path.pts[i + 1], vals.back()));
  return vals;
}

Cplx SpectralCover::ref_value(const Cplx& p) const {
  Polyline route = route_with_detours(base_point, p, features(), abs_clearance());
  return sheet_continuation(ctx->Q, route, base_value).back();
}

// ---- cover construction ----------------------------------------------------

namespace {

bool cuts_cross(const std::vector<Cplx>& tp, const std::vector<std::array<int, 2>>& cuts) {
  for (size_t i = 0; i < cuts.size(); ++i)
    for (size_t j = i + 1; j < cuts.size(); ++j)
      if (segment_crossing(tp[size_t(cuts[i][0])], tp[size_t(cuts[i][1])],
                           tp[size_t(cuts[j][0])], tp[size_t(cuts[j][1])]))
        return true;
  return false;
}

// exhaustive minimum-length non-crossing pairing (fallback when consecutive
// pairing self-intersects)
void pairings_rec(std::vector<int>& free_idx, std::vector<std::array<int, 2>>& cur,
                  const std::vector<Cplx>& tp, double len, double& best_len,
                  std::vector<std::array<int, 2>>& best) {
  if (free_idx.empty()) {
    if (len < best_len && !cuts_cross(tp, cur)) {
      best_len = len;
      best = cur;
    }
    return;
  }
  int a = free_idx.front();
  for (size_t k = 1; k < free_idx.size(); ++k) {
    int b = free_idx[k];
    double d = std::abs(tp[size_t(a)] - tp[size_t(b)]);
    if (len + d >= best_len) continue;
    std::vector<int> rest(free_idx.begin() + 1, free_idx.end());
    rest.erase(rest.begin() + long(k) - 1);
    cur.push_back({a, b});
    pairings_rec(rest, cur, tp, len + d, best_len, best);
    cur.pop_back();
  }
}

double min_feature_dist(const std::vector<Cplx>& f) {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = i + 1; j < f.size(); ++j) d = std::min(d, std::abs(f[i] - f[j]));
  return d;
}

// crude residue of v at z via trapezoid on a small tracked circle
Cplx rough_residue(const QContext<Cplx>& ctx, const Cplx& z, double rho, const Cplx& y_start) {
  Polyline circ = circle_path(z, rho, 256);
  auto ys = sheet_continuation(ctx.Q, circ, y_start);
  Cplx sum = 0;
  for (size_t i = 0; i + 1 < circ.pts.size(); ++i)
    sum += 0.5 * (ys[i] + ys[i + 1]) * (circ.pts[i + 1] - circ.pts[i]);
  return sum / Cplx(0, 2 * M_PI);
}

}  // namespace

SpectralCover build_cover(const QuadDiffSpec& spec, const Tolerances& tol) {
  int n = spec.n();
  if (n < 3) throw std::invalid_argument("build_cover: need at least 3 punctures");
  if (int(spec.r.size()) != n) throw std::invalid_argument("build_cover: |r| != |z|");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(spec.z[size_t(i)] - spec.z[size_t(j)]) < 1e-12)
        throw std::invalid_argument("build_cover: puncture collision");
  if (spec.numerator.degree() != 2 * n - 4)
    throw std::invalid_argument("build_cover: numerator degree must be 2n-4");

  SpectralCover cov;
  cov.spec = spec;
  cov.tol = tol;
  cov.ctx = spec.context();

  // biresidue check: numerator value at z_j vs r_j^2 prod (z_j - z_k)^2
  for (int j = 0; j < n; ++j) {
    Cplx prod = 1;
    for (int k = 0; k < n; ++k)
      if (k != j) prod *= std::pow(spec.z[size_t(j)] - spec.z[size_t(k)], 2);
    Cplx want = spec.r[size_t(j)] * spec.r[size_t(j)] * prod;
    Cplx got = spec.numerator.eval_c(spec.z[size_t(j)]);
    if (std::abs(got - want) > 1e-8 * (1.0 + std::abs(want)))
      throw std::invalid_argument("build_cover: biresidue mismatch at puncture " +
                                  std::to_string(j));
    // resonance guard: lambda = 1/2 + sqrt(1/4 + r^2) must avoid Z/2
    Cplx two_s = 2.0 * std::sqrt(0.25 + spec.r[size_t(j)] * spec.r[size_t(j)]);
    if (std::abs(two_s - std::round(two_s.real())) < 1e-9)
      throw std::invalid_argument("build_cover: resonant residue at puncture " +
                                  std::to_string(j));
  }

  cov.turning_points = polynomial_roots(spec.numerator);
  // simplicity: |P'(x_i)| over local scale
  Poly<Cplx> dP = spec.numerator.derivative();
  double scale = cov.feature_scale();
  for (auto& x : cov.turning_points) {
    double local = std::abs(spec.numerator.lead()) * std::pow(scale, double(2 * n - 5));
    if (std::abs(dP.eval_c(x)) < tol.simplicity * local)
      throw std::runtime_error("build_cover: near-multiple turning point (not GMN-generic)");
    for (auto& z : spec.z)
      if (std::abs(x - z) < tol.clearance * scale)
        throw std::runtime_error("build_cover: turning point too close to a puncture");
  }

  // cut layout: consecutive pairs of the sorted turning points, else the
  // shortest non-crossing perfect matching
  int m = n - 2;
  for (int k = 0; k < m; ++k) cov.cuts.push_back({2 * k, 2 * k + 1});
  if (cuts_cross(cov.turning_points, cov.cuts)) {
    std::vector<int> idx(size_t(2 * m));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::array<int, 2>> cur, best;
    double best_len = std::numeric_limits<double>::infinity();
    pairings_rec(idx, cur, cov.turning_points, 0.0, best_len, best);
    if (best.empty()) throw std::runtime_error("build_cover: no non-crossing cut pairing found");
    cov.cuts = best;
  }
  std::sort(cov.cuts.begin(), cov.cuts.end());

  // base point: south of everything, deterministic
  auto feats = cov.features();
  Cplx c = std::accumulate(feats.begin(), feats.end(), Cplx(0)) / double(feats.size());
  double lo = 0;
  for (auto& f : feats) lo = std::min(lo, f.imag() - c.imag());
  cov.base_point = Cplx(c.real(), c.imag() + lo - 0.8 * scale);
  cov.base_value = std::sqrt(cov.ctx->Q.eval_c(cov.base_point));

  // sheet 1 = the branch whose continuation to z_1 carries residue +r_1
  double rho = 0.25 * min_feature_dist(feats);
  Polyline to_z1 = route_with_detours(cov.base_point, spec.z[0] + rho, feats,
                                      cov.abs_clearance());
  Cplx y_near = sheet_continuation(cov.ctx->Q, to_z1, cov.base_value).back();
  Cplx res = rough_residue(*cov.ctx, spec.z[0], rho, y_near);
  if (std::abs(res - spec.r[0]) > std::abs(res + spec.r[0])) cov.base_value = -cov.base_value;

  return cov;
}

// ---- homology basis --------------------------------------------------------

namespace {

// convex hull (monotone chain), counterclockwise, no duplicate endpoint
std::vector<Cplx> convex_hull(std::vector<Cplx> pts) {
  std::sort(pts.begin(), pts.end(), [](const Cplx& a, const Cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  auto build = [&](auto begin, auto end) {
    std::vector<Cplx> h;
    for (auto it = begin; it != end; ++it) {
      while (h.size() >= 2 && cross2(h.back() - h[h.size() - 2], *it - h.back()) <= 0)
        h.pop_back();
      h.push_back(*it);
    }
    return h;
  };
  auto lower = build(pts.begin(), pts.end());
  auto upper = build(pts.rbegin(), pts.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return lower;
}

// outward offset of a convex counterclockwise polygon by `margin` (miter)
Polyline offset_polygon(const std::vector<Cplx>& hull, double margin) {
  size_t k = hull.size();
  Polyline out;
  for (size_t i = 0; i < k; ++i) {
    const Cplx &prev = hull[(i + k - 1) % k], &cur = hull[i], &next = hull[(i + 1) % k];
    Cplx d1 = (cur - prev) / std::abs(cur - prev);
    Cplx d2 = (next - cur) / std::abs(next - cur);
    Cplx n1(d1.imag(), -d1.real()), n2(d2.imag(), -d2.real());  // outward for ccw
    Cplx bis = n1 + n2;
    double nb = std::abs(bis);
    Cplx dir = nb > 1e-12 ? bis / nb : n1;
    double scale = 1.0 / std::max(0.3, std::sqrt(std::max(0.0, 0.5 * (1.0 + (n1 * std::conj(n2)).real()))));
    out.pts.push_back(cur + margin * scale * dir);
  }
  out.pts.push_back(out.pts.front());
  return out;
}

int count_cut_crossings(const Polyline& loop, const Cplx& a, const Cplx& b) {
  int c = 0;
  for (size_t i = 0; i + 1 < loop.pts.size(); ++i)
    if (segment_crossing(loop.pts[i], loop.pts[i + 1], a, b)) ++c;
  return c;
}

double loop_margin(const SpectralCover& cov, const std::vector<Cplx>& anchor_pts,
                   const std::vector<Cplx>& exclude) {
  // margin limited by the nearest feature that is not part of the anchor set
  double d = std::numeric_limits<double>::infinity();
  for (auto& f : cov.features()) {
    bool skip = false;
    for (auto& e : exclude)
      if (std::abs(f - e) < 1e-12) skip = true;
    if (skip) continue;
    for (size_t i = 0; i + 1 < anchor_pts.size() || (anchor_pts.size() == 1 && i < 1); ++i) {
      if (anchor_pts.size() == 1)
        d = std::min(d, std::abs(f - anchor_pts[0]));
      else
        d = std::min(d, point_segment_dist(f, anchor_pts[i], anchor_pts[i + 1]));
    }
  }
  return d;
}

}  // namespace

std::vector<CycleSpec> homology_basis(const SpectralCover& cov) {
  std::vector<CycleSpec> out;
  int g = cov.genus();
  const auto& tp = cov.turning_points;
  double clr = cov.abs_clearance();

  auto make_cycle = [&](CycleSpec::Label lab, int idx, Polyline path, double weight,
                        bool closed) {
    CycleSpec c;
    c.label = lab;
    c.index = idx;
    c.path = std::move(path);
    c.weight = weight;
    c.closed = closed;
    c.start_value = cov.ref_value(c.path.pts[c.start_vertex()]);
    c.start_sheet = +1;
    return c;
  };

  // a-cycles: stadium loops around cuts 1..g (cut 0 is the b-loop gateway)
  for (int k = 1; k <= g; ++k) {
    Cplx ea = cov.cut_a(k), eb = cov.cut_b(k);
    double margin = std::min(0.45 * loop_margin(cov, {ea, eb}, {ea, eb}), 0.8 * std::abs(eb - ea));
    margin = std::max(margin, 1.5 * clr);
    out.push_back(make_cycle(CycleSpec::Label::A, k - 1, stadium_path(ea, eb, margin), 1.0 / std::sqrt(2.0), true));
  }

  // b-cycles: loop b_i crosses cut 0 and cut i exactly once, enclosing the
  // far endpoint of cut 0, cuts 1..i-1 entirely, and the near endpoint of cut i
  for (int i = 1; i <= g; ++i) {
    std::vector<Cplx> anchors{cov.cut_b(0)};
    for (int j = 1; j < i; ++j) {
      anchors.push_back(cov.cut_a(j));
      anchors.push_back(cov.cut_b(j));
    }
    anchors.push_back(cov.cut_a(i));
    Polyline loop;
    double margin = std::max(1.5 * clr, 0.4 * loop_margin(cov, anchors, anchors));
    // shrink per index so nested b-loops stay disjoint
    margin *= 1.0 - 0.08 * double(i - 1);
    if (anchors.size() == 2) {
      loop = stadium_path(anchors[0], anchors[1], margin);
    } else {
      auto hull = convex_hull(anchors);
      loop = (hull.size() >= 3) ? offset_polygon(hull, margin)
                                : stadium_path(hull.front(), hull.back(), margin);
    }
    // sanity: crossing pattern with the cuts
    for (int k = 0; k <= g; ++k) {
      int want = (k == 0 || k == i) ? 1 : 0;
      int got = count_cut_crossings(loop, cov.cut_a(k), cov.cut_b(k));
      if (got != want)
        throw std::runtime_error("homology_basis: b-loop " + std::to_string(i) +
                                 " crossing pattern failed on cut " + std::to_string(k));
    }
    out.push_back(make_cycle(CycleSpec::Label::B, i - 1, loop, 1.0 / std::sqrt(2.0), true));
  }

  // t-cycles: small positively oriented loops around z_j on the +r_j lift
  auto feats = cov.features();
  for (int j = 0; j < cov.n(); ++j) {
    Cplx z = cov.spec.z[size_t(j)];
    double d = std::numeric_limits<double>::infinity();
    for (auto& f : feats)
      if (std::abs(f - z) > 1e-12) d = std::min(d, std::abs(f - z));
    Polyline circ = circle_path(z, 0.25 * d, 24);
    CycleSpec c = make_cycle(CycleSpec::Label::T, j, circ, 1.0, true);
    // pick the lift with residue +r_j: tracked residue on the circle
    Cplx rj = cov.spec.r[size_t(j)];
    Cplx res = rough_residue(*cov.ctx, z, 0.25 * d, c.start_value);
    if (std::abs(res - rj) > std::abs(res + rj)) {
      c.start_value = -c.start_value;
      c.start_sheet = -1;
    }
    out.push_back(c);
  }

  // kappa arcs: from z_j (other-sheet lift) around the anchor turning point
  // x_1 and back, weight 1/2
  Cplx anchor = tp[0];
  double rho_t = 0.3 * loop_margin(cov, {anchor}, {anchor});
  for (int j = 0; j < cov.n(); ++j) {
    Cplx z = cov.spec.z[size_t(j)];
    Cplx dir = (z - anchor) / std::abs(z - anchor);
    Cplx gate = anchor + rho_t * dir;
    Polyline leg = route_with_detours(z, gate, feats, clr);
    Polyline loop = circle_path(anchor, rho_t, 24);
    // rotate the circle to start at the gate
    size_t best = 0;
    for (size_t s = 0; s < loop.pts.size() - 1; ++s)
      if (std::abs(loop.pts[s] - gate) < std::abs(loop.pts[best] - gate)) best = s;
    Polyline path;
    path.pts = leg.pts;
    path.pts.push_back(loop.pts[best]);
    for (size_t s = 1; s <= loop.pts.size() - 1; ++s)
      path.pts.push_back(loop.pts[(best + s) % (loop.pts.size() - 1)]);
    path.pts.push_back(loop.pts[best]);
    for (size_t s = leg.pts.size(); s-- > 0;) path.pts.push_back(leg.pts[s]);
    CycleSpec c;
    c.label = CycleSpec::Label::K;
    c.index = j;
    c.path = std::move(path);
    c.weight = 0.5;
    c.closed = false;
    // start on the -r_j branch (the z^(2) lift): continue the reference value
    // from the first leg vertex down to a small circle and test the residue
    Cplx p1 = c.path.pts[1];
    Cplx y1 = cov.ref_value(p1);
    double dz = std::numeric_limits<double>::infinity();
    for (auto& f : feats)
      if (std::abs(f - z) > 1e-12) dz = std::min(dz, std::abs(f - z));
    double rho_j = std::min(0.25 * dz, 0.5 * std::abs(p1 - z));
    Cplx u = (p1 - z) / std::abs(p1 - z);
    Cplx w = z + rho_j * u;
    Cplx yw = continue_sqrt(cov.ctx->Q, p1, w, y1);
    // walk the circle from w to the angle-0 point where rough_residue starts
    double th0 = std::arg(u);
    int steps = std::max(4, int(64.0 * std::abs(th0) / (2 * M_PI)));
    Polyline arc;
    for (int s = 0; s <= steps; ++s)
      arc.pts.push_back(z + rho_j * std::exp(Cplx(0, th0 * (1.0 - double(s) / steps))));
    Cplx y0 = sheet_continuation(cov.ctx->Q, arc, yw).back();
    Cplx rj = cov.spec.r[size_t(j)];
    Cplx res = rough_residue(*cov.ctx, z, rho_j, y0);
    c.start_sheet = (std::abs(res + rj) <= std::abs(res - rj)) ? +1 : -1;
    c.start_value = double(c.start_sheet) * y1;
    out.push_back(c);
  }

  // orientation fix: a_i o b_i = +1/2
  for (int i = 0; i < g; ++i) {
    CycleSpec &a = out[size_t(i)], &b = out[size_t(g + i)];
    double s = intersection_number(cov, a, b);
    if (s < 0) {
      std::reverse(b.path.pts.begin(), b.path.pts.end());
      b.start_value = cov.ref_value(b.path.pts[0]);
    }
  }
  return out;
}

double intersection_number(const SpectralCover& cov, const CycleSpec& c1, const CycleSpec& c2) {
  double total = 0;
  // trim kappa arcs to their trackable part (Q blows up at the puncture vertex)
  Polyline t1, t2;
  t1.pts.assign(c1.path.pts.begin() + long(c1.start_vertex()), c1.path.pts.end());
  t2.pts.assign(c2.path.pts.begin() + long(c2.start_vertex()), c2.path.pts.end());
  if (c1.label == CycleSpec::Label::K) t1.pts.pop_back();
  if (c2.label == CycleSpec::Label::K) t2.pts.pop_back();
  const auto& p1 = t1.pts;
  const auto& p2 = t2.pts;
  auto y1 = sheet_continuation(cov.ctx->Q, t1, c1.start_value);
  auto y2 = sheet_continuation(cov.ctx->Q, t2, c2.start_value);
  for (size_t i = 0; i + 1 < p1.size(); ++i) {
    for (size_t j = 0; j + 1 < p2.size(); ++j) {
      auto t = segment_crossing(p1[i], p1[i + 1], p2[j], p2[j + 1]);
      if (!t) continue;
      Cplx X = p1[i] + *t * (p1[i + 1] - p1[i]);
      Cplx ya = continue_sqrt(cov.ctx->Q, p1[i], X, y1[i]);
      Cplx yb = continue_sqrt(cov.ctx->Q, p2[j], X, y2[j]);
      if (std::abs(ya - yb) < std::abs(ya + yb)) {
        double s = cross2(p1[i + 1] - p1[i], p2[j + 1] - p2[j]);
        total += (s > 0) ? 1.0 : -1.0;
      }
    }
  }
  return total * c1.weight * c2.weight;
}

}  // namespace qdw
