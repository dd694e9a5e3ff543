#pragma once

#include "uhho/geometry.hpp"

namespace uhho {

/// Point/weight rule over a 1D or 2D region embedded in the plane.
/// Weights carry the measure (length or area); all rules built here are
/// positive and sum to the measure of their domain.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  double total() const;
  void append(const QuadRule& other);
};

/// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration and
/// cached per point count. Exact for polynomials of degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

QuadRule segment_rule(const Vec2& a, const Vec2& b, int npoints);

/// Rule on a triangle exact for bivariate polynomials of total degree
/// <= `degree` (collapsed tensor-product Gauss; positive weights).
QuadRule triangle_rule(const Vec2& p0, const Vec2& p1, const Vec2& p2, int degree);

QuadRule polygon_rule(const Polygon& p, int degree);
QuadRule parts_rule(std::span<const Polygon> parts, int degree);

}  // namespace uhho
