#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace uhho {

using Vec2 = Eigen::Vector2d;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

using Segment = std::array<Vec2, 2>;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline double segment_length(const Segment& s) { return (s[1] - s[0]).norm(); }

/// Simple polygon, counter-clockwise vertex loop, no repeated closing vertex.
struct Polygon {
  std::vector<Vec2> pts;

  int size() const { return static_cast<int>(pts.size()); }
  const Vec2& operator[](int i) const { return pts[static_cast<size_t>(i)]; }
};

double polygon_area(const Polygon& p);          // signed (positive for CCW)
Vec2 polygon_centroid(const Polygon& p);
double polygon_diameter(const Polygon& p);      // max pairwise vertex distance
bool polygon_is_simple(const Polygon& p);
bool point_in_polygon(const Polygon& p, const Vec2& x);
bool point_in_parts(std::span<const Polygon> parts, const Vec2& x);

double dist_point_segment(const Vec2& x, const Vec2& a, const Vec2& b);
double dist_to_segments(const Vec2& x, std::span<const Segment> segs);

std::vector<Segment> polygon_edges(const Polygon& p);

/// Triangulates a simple polygon into positively oriented triangles.
/// Fast path is a fan from the centroid; falls back to ear clipping.
/// Throws std::runtime_error on non-simple input.
std::vector<std::array<Vec2, 3>> triangulate(const Polygon& p);

struct BallEstimate {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Largest-inscribed-ball lower bound by deterministic grid sampling of the
/// distance-to-boundary function. `spacing` is the sample grid step; the
/// returned radius is exact up to one grid step for axis-aligned rectangles.
BallEstimate inscribed_ball(std::span<const Polygon> parts, std::span<const Segment> boundary,
                            double spacing);

}  // namespace uhho
