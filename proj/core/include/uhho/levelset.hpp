#pragma once

#include "uhho/geometry.hpp"

#include <functional>

namespace uhho {

/// Implicit interface description. Side 1 is {phi < 0}, side 2 is {phi > 0};
/// the unit normal grad(phi)/|grad(phi)| points from side 1 into side 2.
struct LevelSet {
  std::function<double(const Vec2&)> phi;
  std::function<Vec2(const Vec2&)> grad;
  double curvature_bound = 0.0;  // upper bound M on the curvature of {phi=0}; 0 = unknown

  double operator()(const Vec2& x) const { return phi(x); }
  Vec2 gradient(const Vec2& x) const { return grad(x); }
  Vec2 unit_normal(const Vec2& x) const { return grad(x).normalized(); }
};

LevelSet make_line_levelset(double a, double b, double c);          // a x + b y + c
LevelSet make_circle_levelset(double cx, double cy, double r);      // signed distance
LevelSet make_ellipse_levelset(double cx, double cy, double rx, double ry);

struct PolyLevelSetTerm {
  int px = 0, py = 0;
  double coeff = 0.0;
};
LevelSet make_poly_levelset(std::vector<PolyLevelSetTerm> terms);

LevelSet flip_sides(const LevelSet& ls);                 // swaps side 1 and side 2
LevelSet translate(const LevelSet& ls, const Vec2& d);   // moves the interface by d

/// Damped Newton projection of x0 onto {phi = 0} along grad(phi).
/// Converges when |phi| <= tol; throws after `maxit` iterations.
Vec2 project_to_interface(const LevelSet& ls, Vec2 x0, double tol, int maxit = 50);

}  // namespace uhho
