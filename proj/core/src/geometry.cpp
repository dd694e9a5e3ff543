#include "uhho/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uhho {

double polygon_area(const Polygon& p) {
  double a = 0.0;
  const int n = p.size();
  for (int i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    a += cross2(u, v);
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& p) {
  const int n = p.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    const double w = cross2(u, v);
    a += w;
    c += w * (u + v);
  }
  if (std::abs(a) < 1e-300) return p.pts.empty() ? Vec2::Zero() : p[0];
  return c / (3.0 * a);
}

double polygon_diameter(const Polygon& p) {
  double d2 = 0.0;
  const int n = p.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d2 = std::max(d2, (p[i] - p[j]).squaredNorm());
  return std::sqrt(d2);
}

std::vector<Segment> polygon_edges(const Polygon& p) {
  std::vector<Segment> e;
  const int n = p.size();
  e.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) e.push_back({p[i], p[(i + 1) % n]});
  return e;
}

namespace {

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool polygon_is_simple(const Polygon& p) {
  const int n = p.size();
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Polygon& p, const Vec2& x) {
  // Crossing-number test; points on the boundary may land on either side.
  bool inside = false;
  const int n = p.size();
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = p[i];
    const Vec2& b = p[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double t = (x.y() - a.y()) / (b.y() - a.y());
      if (x.x() < a.x() + t * (b.x() - a.x())) inside = !inside;
    }
  }
  return inside;
}

bool point_in_parts(std::span<const Polygon> parts, const Vec2& x) {
  for (const auto& p : parts)
    if (point_in_polygon(p, x)) return true;
  return false;
}

double dist_point_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double l2 = ab.squaredNorm();
  if (l2 == 0.0) return (x - a).norm();
  const double t = std::clamp((x - a).dot(ab) / l2, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

double dist_to_segments(const Vec2& x, std::span<const Segment> segs) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) d = std::min(d, dist_point_segment(x, s[0], s[1]));
  return d;
}

namespace {

std::vector<std::array<Vec2, 3>> fan_from(const Polygon& p, const Vec2& c, double min_area) {
  std::vector<std::array<Vec2, 3>> tris;
  const int n = p.size();
  tris.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    const double a = 0.5 * cross2(u - c, v - c);
    if (a < -min_area) return {};  // not star-shaped from c
    if (a > min_area) tris.push_back({c, u, v});
  }
  return tris;
}

std::vector<std::array<Vec2, 3>> ear_clip(Polygon p, double scale2) {
  std::vector<std::array<Vec2, 3>> tris;
  const double eps = 1e-14 * scale2;
  while (p.size() > 3) {
    const int n = p.size();
    int ear = -1;
    int degenerate = -1;
    for (int i = 0; i < n; ++i) {
      const Vec2& a = p[(i + n - 1) % n];
      const Vec2& b = p[i];
      const Vec2& c = p[(i + 1) % n];
      const double cr = cross2(b - a, c - a);
      if (std::abs(cr) <= eps) {
        degenerate = i;
        continue;
      }
      if (cr < 0) continue;
      bool empty = true;
      for (int j = 0; j < n && empty; ++j) {
        if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
        const Vec2& q = p[j];
        const double s1 = cross2(b - a, q - a);
        const double s2 = cross2(c - b, q - b);
        const double s3 = cross2(a - c, q - c);
        if (s1 > -eps && s2 > -eps && s3 > -eps) empty = false;
      }
      if (empty) {
        ear = i;
        break;
      }
    }
    if (ear >= 0) {
      tris.push_back({p[(ear + n - 1) % n], p[ear], p[(ear + 1) % n]});
      p.pts.erase(p.pts.begin() + ear);
    } else if (degenerate >= 0) {
      p.pts.erase(p.pts.begin() + degenerate);  // collinear vertex, no area lost
    } else {
      throw std::runtime_error("triangulate: ear clipping failed (non-simple sub-cell polygon?)");
    }
  }
  if (p.size() == 3) {
    const double a = 0.5 * cross2(p[1] - p[0], p[2] - p[0]);
    if (a > eps) tris.push_back({p[0], p[1], p[2]});
  }
  return tris;
}

}  // namespace

std::vector<std::array<Vec2, 3>> triangulate(const Polygon& poly) {
  if (poly.size() < 3) return {};
  Polygon p;
  p.pts.reserve(poly.pts.size());
  const double diam = polygon_diameter(poly);
  for (const auto& q : poly.pts) {  // drop duplicate consecutive vertices
    if (p.pts.empty() || (q - p.pts.back()).norm() > 1e-14 * diam) p.pts.push_back(q);
  }
  while (p.size() >= 2 && (p.pts.front() - p.pts.back()).norm() <= 1e-14 * diam) p.pts.pop_back();
  if (p.size() < 3) return {};

  const double scale2 = diam * diam;
  const double min_area = 1e-14 * scale2;
  auto tris = fan_from(p, polygon_centroid(p), min_area);
  if (!tris.empty()) return tris;
  return ear_clip(std::move(p), scale2);
}

BallEstimate inscribed_ball(std::span<const Polygon> parts, std::span<const Segment> boundary,
                            double spacing) {
  Vec2 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& p : parts)
    for (const auto& q : p.pts) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
  BallEstimate best;
  best.center = 0.5 * (lo + hi);
  if (!(spacing > 0) || parts.empty()) return best;
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / spacing)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / spacing)));
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const Vec2 x(lo.x() + (hi.x() - lo.x()) * i / nx, lo.y() + (hi.y() - lo.y()) * j / ny);
      if (!point_in_parts(parts, x)) continue;
      const double d = dist_to_segments(x, boundary);
      if (d > best.radius) {
        best.radius = d;
        best.center = x;
      }
    }
  }
  return best;
}

}  // namespace uhho
