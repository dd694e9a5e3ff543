#include "uhho/errors.hpp"

#include <cmath>

namespace uhho {

ErrorReport compute_errors(const Workspace& ws, const SolveOutput& out, const ManufacturedCase& mc,
                           int k) {
  ErrorReport rep;
  const AggloMesh& am = ws.amesh;
  const int qdeg = 2 * k + 4;
  rep.dofs = out.dofs.n_active;

  for (int c = 0; c < am.num_cells(); ++c) {
    const LocalOps& ops = out.locals[static_cast<size_t>(c)];
    const double h_T = am.meta[static_cast<size_t>(c)].h;
    rep.h = std::max(rep.h, h_T);
    const Vec& uc = out.sol.cell_dofs[static_cast<size_t>(c)];
    const int nc = ops.layout.ncell;

    if (am.tags[static_cast<size_t>(c)] != CellTag::Cut) {
      const int sd = side_of(am.tags[static_cast<size_t>(c)]);
      const auto parts = am.cell_parts(c);
      const QuadRule q = parts_rule(parts, qdeg);
      double acc = 0.0;
      for (int i = 0; i < q.size(); ++i) {
        const Vec2& x = q.points[static_cast<size_t>(i)];
        const Vec2 gh = ops.cb[0].eval_grad(x).transpose() * uc;
        acc += q.weights[static_cast<size_t>(i)] * (mc.grad_u(x, sd) - gh).squaredNorm();
      }
      rep.grad_sq[static_cast<size_t>(sd)] += mc.kappa[static_cast<size_t>(sd)] * acc;
      continue;
    }

    const CutCellGeom& geom = *am.cut_geo[static_cast<size_t>(c)];
    for (int sd = 0; sd < 2; ++sd) {
      const QuadRule q = parts_rule(geom.parts[static_cast<size_t>(sd)], qdeg);
      double acc = 0.0;
      for (int i = 0; i < q.size(); ++i) {
        const Vec2& x = q.points[static_cast<size_t>(i)];
        const Vec2 gh = ops.cb[static_cast<size_t>(sd)].eval_grad(x).transpose() *
                        uc.segment(sd * nc, nc);
        acc += q.weights[static_cast<size_t>(i)] * (mc.grad_u(x, sd) - gh).squaredNorm();
      }
      rep.grad_sq[static_cast<size_t>(sd)] += mc.kappa[static_cast<size_t>(sd)] * acc;
    }

    const InterfaceRule ifq = interface_quadrature(geom.polyline, ws.ls, qdeg);
    double jump_acc = 0.0, flux_acc = 0.0;
    for (int i = 0; i < ifq.rule.size(); ++i) {
      const Vec2& x = ifq.rule.points[static_cast<size_t>(i)];
      const double w = ifq.rule.weights[static_cast<size_t>(i)];
      const Vec2& nrm = ifq.normals[static_cast<size_t>(i)];
      const double u1 = ops.cb[0].eval(x).dot(uc.head(nc));
      const double u2 = ops.cb[1].eval(x).dot(uc.tail(nc));
      const double jump_gap = mc.g_dirichlet(x) - (u1 - u2);
      jump_acc += w * jump_gap * jump_gap;
      const Vec2 g1 = ops.cb[0].eval_grad(x).transpose() * uc.head(nc);
      const Vec2 g2 = ops.cb[1].eval_grad(x).transpose() * uc.tail(nc);
      const double flux_gap =
          mc.g_neumann(x) - (mc.kappa[0] * g1 - mc.kappa[1] * g2).dot(nrm);
      flux_acc += w * flux_gap * flux_gap;
    }
    rep.jump_sq += mc.kappa[0] / h_T * jump_acc;
    rep.flux_sq += h_T / mc.kappa[1] * flux_acc;
  }
  return rep;
}

std::pair<double, double> energy_identity(const Workspace& ws, const SolveOutput& out) {
  double energy = 0.0, load = 0.0;
  for (int c = 0; c < ws.amesh.num_cells(); ++c) {
    const LocalOps& ops = out.locals[static_cast<size_t>(c)];
    const Vec uf = gather_faces(out.dofs, ops.layout, out.sol.face_full);
    Vec u(ops.layout.nloc());
    u.head(ops.layout.cell_dofs()) = out.sol.cell_dofs[static_cast<size_t>(c)];
    u.tail(uf.size()) = uf;
    energy += u.dot(ops.A * u);
    load += ops.rhs.dot(u);
  }
  return {energy, load};
}

std::vector<StudyRow> convergence_study(const ManufacturedCase& mc, std::span<const int> sizes,
                                        const PipelineOptions& opt) {
  if (sizes.size() < 3)
    throw std::invalid_argument("convergence_study: need at least 3 meshes");
  for (size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i + 1] <= sizes[i])
      throw std::invalid_argument("convergence_study: mesh sizes must be increasing");
  std::vector<StudyRow> rows;
  const int nsub_base = opt.n_sub > 0 ? opt.n_sub : default_n_sub(opt.k);
  for (int n : sizes) {
    PipelineOptions lvl = opt;
    // keep the interface-geometry error below the scheme error on every
    // level: the polyline gap scales as (h/n_sub)^2, so n_sub grows with n
    lvl.n_sub = nsub_base * std::max(1, n / sizes[0]);
    const CaseRun run = run_case(mc, n, n, lvl);
    StudyRow row;
    row.n = n;
    row.err = compute_errors(*run.ws, run.out, mc, opt.k);
    row.h = run.ws->diag.resolution.h;  // background mesh size drives the EOC
    row.dofs = row.err.dofs;
    if (!rows.empty()) {
      const StudyRow& prev = rows.back();
      const double e0 = prev.err.energy(), e1 = row.err.energy();
      if (e0 > 1e-15 && e1 > 1e-15)
        row.eoc = std::log(e0 / e1) / std::log(prev.h / row.h);
      const double j0 = std::sqrt(prev.err.jump_sq), j1 = std::sqrt(row.err.jump_sq);
      if (j0 > 1e-15 && j1 > 1e-15)
        row.jump_eoc = std::log(j0 / j1) / std::log(prev.h / row.h);
    }
    rows.push_back(row);
  }
  return rows;
}

SweepResult cut_robustness_sweep(const ManufacturedCase& mc, int n, const PipelineOptions& opt,
                                 std::span<const double> offsets) {
  SweepResult res;
  const double h = mc.domain.width() / n * std::numbers::sqrt2;
  for (double eps : offsets) {
    ManufacturedCase shifted = mc;
    shifted.ls = translate(mc.ls, Vec2(eps * h, 0.0));
    const CaseRun run = run_case(shifted, n, n, opt);
    const ErrorReport rep = compute_errors(*run.ws, run.out, shifted, opt.k);
    res.values.push_back(eps);
    res.energies.push_back(rep.energy());
    if (run.out.stats.pivot_min > 0.0)
      res.worst_pivot_ratio =
          std::max(res.worst_pivot_ratio, run.out.stats.pivot_max / run.out.stats.pivot_min);
  }
  const auto [mn, mx] = std::minmax_element(res.energies.begin(), res.energies.end());
  res.ratio = *mx / *mn;
  return res;
}

SweepResult contrast_sweep(double r0, int n, const PipelineOptions& opt,
                           std::span<const double> contrasts, const Rectangle& domain) {
  SweepResult res;
  for (double ratio : contrasts) {
    CaseParams p;
    p.domain = domain;
    p.kappa1 = 1.0;
    p.kappa2 = ratio;
    p.r0 = r0;
    const ManufacturedCase mc = make_case("radial_circle", p);
    const CaseRun run = run_case(mc, n, n, opt);
    const ErrorReport rep = compute_errors(*run.ws, run.out, mc, opt.k);
    res.values.push_back(ratio);
    res.energies.push_back(rep.energy());
    if (run.out.stats.pivot_min > 0.0)
      res.worst_pivot_ratio =
          std::max(res.worst_pivot_ratio, run.out.stats.pivot_max / run.out.stats.pivot_min);
  }
  const auto [mn, mx] = std::minmax_element(res.energies.begin(), res.energies.end());
  res.ratio = *mx / *mn;
  return res;
}

}  // namespace uhho
