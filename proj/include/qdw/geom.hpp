#pragma once
// Planar geometry helpers for paths, cuts and cycle routing.

#include <optional>
#include <vector>

#include "qdw/field.hpp"

namespace qdw {

inline double cross2(const Cplx& a, const Cplx& b) {
  return a.real() * b.imag() - a.imag() * b.real();
}

// distance from point p to segment [a, b]
inline double point_segment_dist(const Cplx& p, const Cplx& a, const Cplx& b) {
  Cplx ab = b - a;
  double L2 = std::norm(ab);
  if (L2 == 0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// proper crossing of open segments; returns parameter on [a,b] if transversal
inline std::optional<double> segment_crossing(const Cplx& a, const Cplx& b, const Cplx& c,
                                              const Cplx& d) {
  Cplx r = b - a, s = d - c;
  double den = cross2(r, s);
  if (den == 0) return std::nullopt;
  double t = cross2(c - a, s) / den;
  double u = cross2(c - a, r) / den;
  if (t <= 0 || t >= 1 || u <= 0 || u >= 1) return std::nullopt;
  return t;
}

struct Polyline {
  std::vector<Cplx> pts;

  double length() const {
    double L = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) L += std::abs(pts[i + 1] - pts[i]);
    return L;
  }
  bool closed(double tol = 1e-12) const {
    return pts.size() > 2 && std::abs(pts.front() - pts.back()) < tol;
  }
  double min_dist(const Cplx& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      d = std::min(d, point_segment_dist(p, pts[i], pts[i + 1]));
    return d;
  }
};

// regular polygon approximation of a circle, closed, counterclockwise
inline Polyline circle_path(const Cplx& center, double radius, int segs = 24) {
  Polyline p;
  for (int i = 0; i <= segs; ++i) {
    double th = 2 * M_PI * double(i) / segs;
    p.pts.push_back(center + radius * Cplx(std::cos(th), std::sin(th)));
  }
  p.pts.back() = p.pts.front();
  return p;
}

// counterclockwise "stadium" around segment [a, b] at the given margin
inline Polyline stadium_path(const Cplx& a, const Cplx& b, double margin, int arc_segs = 10) {
  Cplx dir = (b - a) / std::abs(b - a);
  Cplx n(-dir.imag(), dir.real());
  Polyline p;
  // side a->b shifted by -n, then half circle around b, side back, half circle around a
  p.pts.push_back(a - margin * n);
  p.pts.push_back(b - margin * n);
  double th0 = std::arg(-n);
  for (int i = 1; i <= arc_segs; ++i) {
    double th = th0 + M_PI * double(i) / arc_segs;
    p.pts.push_back(b + margin * Cplx(std::cos(th), std::sin(th)));
  }
  p.pts.push_back(a + margin * n);
  for (int i = 1; i <= arc_segs; ++i) {
    double th = th0 + M_PI + M_PI * double(i) / arc_segs;
    p.pts.push_back(a + margin * Cplx(std::cos(th), std::sin(th)));
  }
  p.pts.back() = p.pts.front();
  return p;
}

// Straight route from s to e, detouring around obstacles that come within
// `clearance` of the path. Obstacles within clearance of s or e themselves are
// ignored (the caller is deliberately starting/ending there).
inline Polyline route_with_detours(const Cplx& s, const Cplx& e, const std::vector<Cplx>& obstacles,
                                   double clearance, int max_rounds = 8) {
  Polyline path;
  path.pts = {s, e};
  for (int round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (size_t i = 0; i + 1 < path.pts.size() && !changed; ++i) {
      Cplx a = path.pts[i], b = path.pts[i + 1];
      for (const Cplx& ob : obstacles) {
        if (std::abs(ob - s) < clearance || std::abs(ob - e) < clearance) continue;
        if (point_segment_dist(ob, a, b) >= clearance) continue;
        Cplx ab = b - a;
        double t = std::clamp(((ob - a) * std::conj(ab)).real() / std::norm(ab), 0.05, 0.95);
        Cplx foot = a + t * ab;
        Cplx away = foot - ob;
        double d = std::abs(away);
        Cplx n = d > 1e-12 * std::abs(ab) ? away / d : Cplx(-ab.imag(), ab.real()) / std::abs(ab);
        path.pts.insert(path.pts.begin() + long(i) + 1, ob + 1.6 * clearance * n);
        changed = true;
        break;
      }
    }
    if (!changed) return path;
  }
  throw std::runtime_error("route_with_detours: could not clear obstacles");
}

}  // namespace qdw
