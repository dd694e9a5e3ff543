#include "uhho/pipeline.hpp"

#include "uhho/parallel.hpp"

namespace uhho {

int default_n_sub(int k) { return 4 * (k + 1) * (k + 1); }

std::unique_ptr<Workspace> prepare(PolyMesh mesh, LevelSet ls, const PipelineOptions& opt) {
  auto ws = std::make_unique<Workspace>();
  ws->mesh = std::move(mesh);
  ws->ls = std::move(ls);
  ws->meta = compute_meta(ws->mesh);
  ws->diag.rho = estimate_rho(ws->mesh, ws->meta);

  ws->topo = classify_cells(ws->mesh, ws->ls, opt.classify_tol);
  ws->diag.resolution = check_resolution(ws->mesh, ws->meta, ws->ls, ws->topo);
  const int n_sub = opt.n_sub > 0 ? opt.n_sub : default_n_sub(opt.k);
  build_subcells(ws->mesh, ws->ls, ws->topo, n_sub, opt.threads);
  ws->diag.n_cut = ws->topo.num_cut();

  ws->diag.delta = opt.delta > 0.0 ? opt.delta : 0.25 * std::pow(ws->diag.rho, 3);
  ws->diag.delta_star = ws->diag.rho * ws->diag.delta / 3.0;
  ws->part = partition_cut_cells(ws->mesh, ws->meta, ws->topo, ws->diag.delta);
  ws->diag.n_ok = static_cast<int>(ws->part.ok.size());
  ws->diag.n_ko1 = static_cast<int>(ws->part.ko1.size());
  ws->diag.n_ko2 = static_cast<int>(ws->part.ko2.size());

  if (ws->part.ko1.empty() && ws->part.ko2.empty()) {
    ws->amesh = trivial_agglomeration(ws->mesh, ws->meta, ws->topo);
  } else {
    ws->sel = select_neighbors(ws->mesh, ws->meta, ws->topo, ws->part);
    ws->amesh = agglomerate(ws->mesh, ws->meta, ws->topo, ws->part, ws->sel, ws->diag.delta_star);
  }
  for (const auto& m : ws->amesh.members)
    if (m.size() > 1) ++ws->diag.n_agglomerates;
  return ws;
}

SolveOutput solve_on(const Workspace& ws, std::array<double, 2> kappa, const PipelineOptions& opt,
                     const ProblemData* data,
                     const std::function<double(const Vec2&, int)>* exact_trace) {
  if (!(kappa[0] <= kappa[1]))
    throw std::invalid_argument("solve_on: expects kappa[0] <= kappa[1] (normalize sides first)");
  SolveOutput out;
  const AggloMesh& am = ws.amesh;
  out.locals.resize(static_cast<size_t>(am.num_cells()));
  parallel_for(am.num_cells(), opt.threads, [&](int c) {
    const CellInput in = gather_cell(am, ws.ls, c, opt.k, kappa);
    out.locals[static_cast<size_t>(c)] = build_local_ops(in, opt.k, opt.eta_override, data);
  });

  out.dofs = build_dof_map(am, opt.k);
  if (exact_trace && opt.dirichlet_from_exact) {
    for (int b = 0; b < out.dofs.num_blocks(); ++b) {
      const auto& blk = out.dofs.blocks[static_cast<size_t>(b)];
      if (!blk.eliminated) continue;
      const Segment s = am.base->face_segment(blk.face);
      const Segment segs[1] = {s};
      const FaceBasis fb(opt.k, segs);
      const int sd = blk.side;
      const Vec g = project_face([&](const Vec2& x) { return (*exact_trace)(x, sd); }, fb,
                                 opt.k + 6);
      out.dofs.prescribed.segment(static_cast<long>(b) * out.dofs.nfb, out.dofs.nfb) = g;
    }
  }

  out.sys = assemble(am, out.locals, out.dofs);
  const Vec x = solve(out.sys, &out.stats);
  out.sol = recover(am, out.locals, out.dofs, x);
  return out;
}

CaseRun run_case(const ManufacturedCase& mc, int nx, int ny, const PipelineOptions& opt,
                 double perturbation, unsigned long long seed) {
  Rectangle dom = mc.domain;
  PolyMesh mesh = generate_cartesian(nx, ny, dom);
  if (perturbation > 0.0) perturb_vertices(mesh, perturbation, seed);
  CaseRun run;
  run.ws = prepare(std::move(mesh), mc.ls, opt);
  const ProblemData data = mc.data();
  const std::function<double(const Vec2&, int)> trace = mc.u;
  run.out = solve_on(*run.ws, mc.kappa, opt, &data, &trace);
  return run;
}

}  // namespace uhho
