#include "uhho/levelset.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace uhho {

LevelSet make_line_levelset(double a, double b, double c) {
  const double n = std::hypot(a, b);
  if (n == 0.0) throw std::invalid_argument("line level set: (a,b) must be nonzero");
  LevelSet ls;
  ls.phi = [a, b, c](const Vec2& x) { return a * x.x() + b * x.y() + c; };
  ls.grad = [a, b](const Vec2&) { return Vec2(a, b); };
  ls.curvature_bound = 0.0;  // straight: any h resolves it
  return ls;
}

LevelSet make_circle_levelset(double cx, double cy, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("circle level set: r must be positive");
  LevelSet ls;
  const Vec2 c(cx, cy);
  ls.phi = [c, r](const Vec2& x) { return (x - c).norm() - r; };
  ls.grad = [c](const Vec2& x) {
    const Vec2 d = x - c;
    const double n = d.norm();
    return n > 0.0 ? Vec2(d / n) : Vec2(1.0, 0.0);
  };
  ls.curvature_bound = 1.0 / r;
  return ls;
}

LevelSet make_ellipse_levelset(double cx, double cy, double rx, double ry) {
  if (!(rx > 0.0) || !(ry > 0.0)) throw std::invalid_argument("ellipse level set: radii must be positive");
  LevelSet ls;
  ls.phi = [=](const Vec2& x) {
    const double u = (x.x() - cx) / rx, v = (x.y() - cy) / ry;
    return u * u + v * v - 1.0;
  };
  ls.grad = [=](const Vec2& x) {
    return Vec2(2.0 * (x.x() - cx) / (rx * rx), 2.0 * (x.y() - cy) / (ry * ry));
  };
  ls.curvature_bound = std::max(rx / (ry * ry), ry / (rx * rx));
  return ls;
}

LevelSet make_poly_levelset(std::vector<PolyLevelSetTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("poly level set: empty coefficient table");
  LevelSet ls;
  auto t = std::make_shared<std::vector<PolyLevelSetTerm>>(std::move(terms));
  ls.phi = [t](const Vec2& x) {
    double s = 0.0;
    for (const auto& m : *t) s += m.coeff * std::pow(x.x(), m.px) * std::pow(x.y(), m.py);
    return s;
  };
  ls.grad = [t](const Vec2& x) {
    Vec2 g = Vec2::Zero();
    for (const auto& m : *t) {
      if (m.px > 0) g.x() += m.coeff * m.px * std::pow(x.x(), m.px - 1) * std::pow(x.y(), m.py);
      if (m.py > 0) g.y() += m.coeff * m.py * std::pow(x.x(), m.px) * std::pow(x.y(), m.py - 1);
    }
    return g;
  };
  return ls;
}

LevelSet flip_sides(const LevelSet& ls) {
  LevelSet out;
  auto phi = ls.phi;
  auto grad = ls.grad;
  out.phi = [phi](const Vec2& x) { return -phi(x); };
  out.grad = [grad](const Vec2& x) { return Vec2(-grad(x)); };
  out.curvature_bound = ls.curvature_bound;
  return out;
}

LevelSet translate(const LevelSet& ls, const Vec2& d) {
  LevelSet out;
  auto phi = ls.phi;
  auto grad = ls.grad;
  out.phi = [phi, d](const Vec2& x) { return phi(x - d); };
  out.grad = [grad, d](const Vec2& x) { return grad(x - d); };
  out.curvature_bound = ls.curvature_bound;
  return out;
}

Vec2 project_to_interface(const LevelSet& ls, Vec2 x, double tol, int maxit) {
  double f = ls.phi(x);
  for (int it = 0; it < maxit; ++it) {
    const Vec2 g = ls.grad(x);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) throw std::runtime_error("project_to_interface: vanishing gradient");
    // phi cannot be driven below its own evaluation noise
    const double floor =
        64.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm()) * std::sqrt(g2);
    if (std::abs(f) <= std::max(tol, floor)) return x;
    Vec2 step = (f / g2) * g;
    bool moved = false;
    for (int half = 0; half < 40 && !moved; ++half) {  // damping by step halving
      const Vec2 xn = x - step;
      const double fn = ls.phi(xn);
      if (std::abs(fn) < std::abs(f)) {
        x = xn;
        f = fn;
        moved = true;
      } else {
        step *= 0.5;
      }
    }
    if (!moved) break;  // stagnation at the rounding floor
  }
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm()) * ls.grad(x).norm();
  if (std::abs(f) <= std::max(tol, floor)) return x;
  throw std::runtime_error("project_to_interface: Newton did not converge in 50 iterations");
}

}  // namespace uhho
