#include "uhho/cases.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace uhho {

ProblemData ManufacturedCase::data() const {
  ProblemData d;
  d.f = f;
  d.g_dirichlet_jump = [this](const Vec2& x) { return g_dirichlet(x); };
  d.g_neumann_jump = [this](const Vec2& x) { return g_neumann(x); };
  return d;
}

namespace {

void validate_case(const ManufacturedCase& mc) {
  const double diam = std::hypot(mc.domain.width(), mc.domain.height());
  const double step = 1e-6 * diam;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(mc.domain.xmin, mc.domain.xmax);
  std::uniform_real_distribution<double> uy(mc.domain.ymin, mc.domain.ymax);

  for (int sd = 0; sd < 2; ++sd) {
    double umax = 1e-12, gmax = 1e-12, fmax = 1e-12;
    std::vector<Vec2> pts;
    for (int i = 0; i < 1000; ++i) {
      const Vec2 x(ux(rng), uy(rng));
      pts.push_back(x);
      umax = std::max(umax, std::abs(mc.u(x, sd)));
      gmax = std::max(gmax, mc.grad_u(x, sd).norm());
      fmax = std::max(fmax, std::abs(mc.f(x, sd)));
    }
    for (const Vec2& x : pts) {
      const Vec2 g = mc.grad_u(x, sd);
      const Vec2 g_fd((mc.u(x + Vec2(step, 0), sd) - mc.u(x - Vec2(step, 0), sd)) / (2 * step),
                      (mc.u(x + Vec2(0, step), sd) - mc.u(x - Vec2(0, step), sd)) / (2 * step));
      if ((g - g_fd).norm() > 1e-6 * std::max(gmax, umax / diam))
        throw std::logic_error("make_case: hand-coded gradient disagrees with finite differences");
      // -div(kappa grad u) = f, with the divergence taken by FD of the gradient
      const double hstep = 1e-5 * diam;
      const double div =
          (mc.grad_u(x + Vec2(hstep, 0), sd).x() - mc.grad_u(x - Vec2(hstep, 0), sd).x() +
           mc.grad_u(x + Vec2(0, hstep), sd).y() - mc.grad_u(x - Vec2(0, hstep), sd).y()) /
          (2 * hstep);
      if (std::abs(mc.kappa[static_cast<size_t>(sd)] * div + mc.f(x, sd)) >
          1e-4 * std::max(fmax, mc.kappa[static_cast<size_t>(sd)] * gmax / diam))
        throw std::logic_error("make_case: source term disagrees with -div(kappa grad u)");
    }
  }

  // closed interfaces must stay inside the domain: constant sign of phi on
  // the boundary (line interfaces necessarily reach the boundary and are
  // checked against cut boundary faces at solve time instead)
  if (mc.requires_enclosed_interface) {
    const int nb = 256;
    double sign0 = 0.0;
    for (int e = 0; e < 4; ++e) {
      for (int i = 0; i <= nb; ++i) {
        const double t = static_cast<double>(i) / nb;
        Vec2 x;
        switch (e) {
          case 0: x = Vec2(mc.domain.xmin + t * mc.domain.width(), mc.domain.ymin); break;
          case 1: x = Vec2(mc.domain.xmin + t * mc.domain.width(), mc.domain.ymax); break;
          case 2: x = Vec2(mc.domain.xmin, mc.domain.ymin + t * mc.domain.height()); break;
          default: x = Vec2(mc.domain.xmax, mc.domain.ymin + t * mc.domain.height()); break;
        }
        const double p = mc.ls.phi(x);
        if (sign0 == 0.0) sign0 = p > 0 ? 1.0 : -1.0;
        if (p * sign0 <= 0.0)
          throw std::runtime_error("make_case: interface touches the domain boundary; rejected");
      }
    }
  }

  // jump identities at projected interface points (exercises g_D/g_N plumbing)
  std::mt19937_64 rng2(4711);
  int found = 0;
  double uscale = 1e-12;
  for (int i = 0; i < 2000 && found < 100; ++i) {
    const Vec2 x0(ux(rng2), uy(rng2));
    Vec2 s;
    try {
      s = project_to_interface(mc.ls, x0, 1e-12 * diam * std::max(mc.ls.gradient(x0).norm(), 1e-300));
    } catch (const std::exception&) {
      continue;
    }
    if (s.x() < mc.domain.xmin || s.x() > mc.domain.xmax || s.y() < mc.domain.ymin ||
        s.y() > mc.domain.ymax)
      continue;
    ++found;
    uscale = std::max({uscale, std::abs(mc.u(s, 0)), std::abs(mc.u(s, 1))});
    if (std::abs(mc.u(s, 0) - mc.u(s, 1) - mc.g_dirichlet(s)) > 1e-10 * uscale)
      throw std::logic_error("make_case: Dirichlet jump identity violated");
    const double gn = (mc.kappa[0] * mc.grad_u(s, 0) - mc.kappa[1] * mc.grad_u(s, 1))
                          .dot(mc.ls.unit_normal(s));
    if (std::abs(gn - mc.g_neumann(s)) > 1e-10 * (1.0 + std::abs(gn)))
      throw std::logic_error("make_case: Neumann jump identity violated");
  }
  // found == 0 is fine: the interface may lie entirely outside the domain
  // (fitted limit), in which case the jump identities are vacuous.
}

void normalize_sides(ManufacturedCase& mc) {
  if (mc.kappa[0] <= mc.kappa[1]) return;
  mc.swapped = true;
  std::swap(mc.kappa[0], mc.kappa[1]);
  mc.ls = flip_sides(mc.ls);
  auto u = mc.u;
  auto g = mc.grad_u;
  auto f = mc.f;
  mc.u = [u](const Vec2& x, int sd) { return u(x, 1 - sd); };
  mc.grad_u = [g](const Vec2& x, int sd) { return g(x, 1 - sd); };
  mc.f = [f](const Vec2& x, int sd) { return f(x, 1 - sd); };
}

}  // namespace

ManufacturedCase make_case(const std::string& name, const CaseParams& p) {
  ManufacturedCase mc;
  mc.name = name;
  mc.domain = p.domain;
  mc.kappa = {p.kappa1, p.kappa2};

  if (name == "radial_circle") {
    // u^i = |x|^2 / kappa^i (side 2 shifted to vanish on the circle):
    // fluxes 2|x| match across the circle, the value jump does not.
    const double r0 = p.r0;
    if (!(r0 > 0.0)) throw std::invalid_argument("radial_circle: r0 must be positive");
    mc.requires_enclosed_interface = true;
    mc.ls = make_circle_levelset(0.0, 0.0, r0);
    const double k1 = p.kappa1, k2 = p.kappa2;
    mc.u = [k1, k2, r0](const Vec2& x, int sd) {
      return sd == 0 ? x.squaredNorm() / k1 : (x.squaredNorm() - r0 * r0) / k2;
    };
    mc.grad_u = [k1, k2](const Vec2& x, int sd) {
      return Vec2(2.0 * x / (sd == 0 ? k1 : k2));
    };
    mc.f = [](const Vec2&, int) { return -4.0; };
  } else if (name == "planar_kink") {
    double la = p.line_a, lb = p.line_b, lc = p.line_c;
    if (la == 0.0 && lb == 0.0) {
      la = 1.0;
      lc = -p.x0;
    }
    mc.ls = make_line_levelset(la, lb, lc);
    const double nn = std::hypot(la, lb);
    const std::array<double, 2> a = {p.alpha1, p.alpha2};
    const std::array<double, 2> b = {p.beta1, p.beta2};
    // piecewise linear in the signed distance d = (a x + b y + c)/|(a,b)|
    mc.u = [=](const Vec2& x, int sd) {
      const double d = (la * x.x() + lb * x.y() + lc) / nn;
      return a[static_cast<size_t>(sd)] * d + b[static_cast<size_t>(sd)];
    };
    mc.grad_u = [=](const Vec2&, int sd) {
      return Vec2(a[static_cast<size_t>(sd)] * la / nn, a[static_cast<size_t>(sd)] * lb / nn);
    };
    mc.f = [](const Vec2&, int) { return 0.0; };
  } else if (name == "smooth_nojump") {
    if (p.kappa1 != p.kappa2)
      throw std::invalid_argument("smooth_nojump: requires kappa1 == kappa2");
    mc.ls = p.interface_ls ? *p.interface_ls : make_circle_levelset(0.0, 0.0, p.r0);
    const double kap = p.kappa1;
    if (p.profile == "sine") {
      const double pi = std::numbers::pi;
      mc.u = [pi](const Vec2& x, int) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
      mc.grad_u = [pi](const Vec2& x, int) {
        return Vec2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                    pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
      };
      mc.f = [pi, kap](const Vec2& x, int) {
        return 2.0 * pi * pi * kap * std::sin(pi * x.x()) * std::sin(pi * x.y());
      };
    } else if (p.profile == "linear") {
      mc.u = [](const Vec2& x, int) { return x.x(); };
      mc.grad_u = [](const Vec2&, int) { return Vec2(1.0, 0.0); };
      mc.f = [](const Vec2&, int) { return 0.0; };
    } else {
      throw std::invalid_argument("smooth_nojump: unknown profile " + p.profile);
    }
  } else if (name == "poly") {
    if (p.kappa1 != p.kappa2) throw std::invalid_argument("poly: requires kappa1 == kappa2");
    if (p.degree < 0) throw std::invalid_argument("poly: degree must be >= 0");
    // straight overlay interface by default: keeps the cut geometry exact so
    // polynomial solutions are reproduced to rounding
    mc.ls = p.interface_ls ? *p.interface_ls : make_line_levelset(1.0, 0.35, -0.27);
    const double cx = 0.6, cy = 0.45, ce = 0.2;
    const int d = p.degree;
    const double kap = p.kappa1;
    mc.u = [=](const Vec2& x, int) { return std::pow(cx * x.x() + cy * x.y() + ce, d); };
    mc.grad_u = [=](const Vec2& x, int) {
      const double t = d > 0 ? d * std::pow(cx * x.x() + cy * x.y() + ce, d - 1) : 0.0;
      return Vec2(cx * t, cy * t);
    };
    mc.f = [=](const Vec2& x, int) {
      if (d < 2) return 0.0;
      return -kap * d * (d - 1) * (cx * cx + cy * cy) *
             std::pow(cx * x.x() + cy * x.y() + ce, d - 2);
    };
  } else {
    throw std::invalid_argument("make_case: unknown case " + name);
  }

  normalize_sides(mc);
  validate_case(mc);
  return mc;
}

}  // namespace uhho
