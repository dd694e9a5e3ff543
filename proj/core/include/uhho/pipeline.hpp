#pragma once

#include "uhho/assembly.hpp"
#include "uhho/cases.hpp"

#include <memory>

namespace uhho {

struct PipelineOptions {
  int k = 1;
  double eta_override = 0.0;  // 0: per-cell calibration
  int n_sub = 0;              // 0: default 4 (k+1)^2
  double delta = 0.0;         // 0: rho^3 / 4
  int threads = 1;            // 0: hardware concurrency
  double classify_tol = 1e-12;
  bool dirichlet_from_exact = true;  // project the exact trace on boundary faces
};

struct PipelineDiagnostics {
  double rho = 0.0, delta = 0.0, delta_star = 0.0;
  int n_cut = 0, n_ok = 0, n_ko1 = 0, n_ko2 = 0;
  int n_agglomerates = 0;  // merged cells (members > 1)
  ResolutionCheck resolution;
};

/// Owns the mesh-side state of one run (the AggloMesh points into `mesh`).
struct Workspace {
  PolyMesh mesh;
  std::vector<CellMeta> meta;
  LevelSet ls;
  CutTopology topo;
  CutPartition part;
  NeighborSelection sel;
  AggloMesh amesh;
  PipelineDiagnostics diag;
};

/// classify -> sub-cells -> partition -> select -> agglomerate -> delta* check
std::unique_ptr<Workspace> prepare(PolyMesh mesh, LevelSet ls, const PipelineOptions& opt);

struct SolveOutput {
  std::vector<LocalOps> locals;
  GlobalDofMap dofs;
  SkeletonSystem sys;
  SolveStats stats;
  HybridSolution sol;
};

/// Local operators -> condensed assembly -> sparse solve -> recovery.
/// `exact_trace` (side-indexed) provides Dirichlet data on boundary faces;
/// null means homogeneous.
SolveOutput solve_on(const Workspace& ws, std::array<double, 2> kappa, const PipelineOptions& opt,
                     const ProblemData* data,
                     const std::function<double(const Vec2&, int)>* exact_trace);

/// Convenience: full run of a manufactured case on an nx-by-ny Cartesian mesh.
struct CaseRun {
  std::unique_ptr<Workspace> ws;
  SolveOutput out;
};
CaseRun run_case(const ManufacturedCase& mc, int nx, int ny, const PipelineOptions& opt,
                 double perturbation = 0.0, unsigned long long seed = 0);

int default_n_sub(int k);

}  // namespace uhho
