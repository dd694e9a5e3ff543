#pragma once

#include "uhho/hho.hpp"

#include <string>

namespace uhho {

/// Closed-form interface problem with exact solution: u and its gradient per
/// side, the derived source f = -div(kappa grad u), and the interface jumps
/// g_D = [u], g_N = [kappa grad u].n obtained from the same closed forms.
/// Construction validates the hand-coded derivatives against central finite
/// differences and rejects interfaces that touch the domain boundary.
struct ManufacturedCase {
  std::string name;
  LevelSet ls;
  std::array<double, 2> kappa = {1.0, 1.0};
  Rectangle domain;
  bool swapped = false;  // sides renumbered so kappa[0] <= kappa[1]
  bool requires_enclosed_interface = false;

  std::function<double(const Vec2&, int)> u;
  std::function<Vec2(const Vec2&, int)> grad_u;
  std::function<double(const Vec2&, int)> f;

  double g_dirichlet(const Vec2& x) const { return u(x, 0) - u(x, 1); }
  double g_neumann(const Vec2& x) const {
    return (kappa[0] * grad_u(x, 0) - kappa[1] * grad_u(x, 1)).dot(ls.unit_normal(x));
  }

  ProblemData data() const;
};

struct CaseParams {
  Rectangle domain{-1.0, 1.0, -1.0, 1.0};
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double r0 = 0.71;  // radial_circle interface radius
  double x0 = 0.31;  // planar_kink interface position (vertical-line shorthand)
  double line_a = 0.0, line_b = 0.0, line_c = 0.0;  // planar_kink general line (0,0,0: use x0)
  double alpha1 = 1.0, alpha2 = -0.5;  // kink slopes (normal direction)
  double beta1 = 0.7, beta2 = -0.2;    // kink offsets
  int degree = 2;                       // poly case: polynomial degree (k+1)
  std::string profile = "sine";         // smooth_nojump: "sine" | "linear"
  const LevelSet* interface_ls = nullptr;  // smooth_nojump / poly overlay interface
};

/// names: radial_circle, planar_kink, smooth_nojump, poly
ManufacturedCase make_case(const std::string& name, const CaseParams& params);

}  // namespace uhho
