#include "uhho/errors.hpp"

#include <cstdio>

using namespace uhho;

int main() {
  try {
    const int sizes[] = {8, 16, 32, 64};
    {
      CaseParams p;
      p.kappa1 = 1.0;
      p.kappa2 = 100.0;
      p.r0 = 0.71;
      ManufacturedCase mc = make_case("radial_circle", p);
      for (int k = 0; k <= 2; ++k) {
        PipelineOptions opt;
        opt.k = k;
        opt.threads = 8;
        auto rows = convergence_study(mc, sizes, opt);
        for (const auto& r : rows)
          std::printf("radial k=%d n=%2d E=%.4e eoc=%.2f jump_eoc=%.2f\n", k, r.n,
                      r.err.energy(), r.eoc, r.jump_eoc);
      }
    }
    {  // poly exactness with a vertex-aligned tilted line on 16^2
      LevelSet line = make_line_levelset(1.0, -0.875, 0.0);
      for (int k = 0; k <= 2; ++k) {
        CaseParams p;
        p.kappa1 = p.kappa2 = 2.5;
        p.degree = k + 1;
        p.interface_ls = &line;
        ManufacturedCase mc = make_case("poly", p);
        PipelineOptions opt;
        opt.k = k;
        opt.threads = 8;
        CaseRun run = run_case(mc, 16, 16, opt);
        ErrorReport rep = compute_errors(*run.ws, run.out, mc, k);
        std::printf("poly k=%d n=16 cut=%d E^2=%.3e\n", k, run.ws->diag.n_cut, rep.total());
      }
    }
    {  // kink on a vertex-aligned tilted line
      CaseParams p;
      p.kappa1 = 1.0;
      p.kappa2 = 4.0;
      p.line_a = 1.0;
      p.line_b = -0.875;
      p.line_c = 0.0;
      ManufacturedCase mc = make_case("planar_kink", p);
      PipelineOptions opt;
      opt.k = 1;
      opt.threads = 8;
      CaseRun run = run_case(mc, 16, 16, opt);
      ErrorReport rep = compute_errors(*run.ws, run.out, mc, 1);
      std::printf("kink k=1 n=16 cut=%d E^2=%.3e\n", run.ws->diag.n_cut, rep.total());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "FAILED: %s\n", e.what());
    return 1;
  }
  return 0;
}
