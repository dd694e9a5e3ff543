#pragma once

#include "uhho/pipeline.hpp"

namespace uhho {

/// Term-wise energy error of the a-priori bound: broken kappa-weighted
/// gradient errors per side, the interface jump mismatch
/// kappa^1 h^{-1} |g_D - [U]|^2, and the flux mismatch
/// (kappa^2)^{-1} h |g_N - [kappa grad U].n|^2.
struct ErrorReport {
  std::array<double, 2> grad_sq = {0.0, 0.0};
  double jump_sq = 0.0;
  double flux_sq = 0.0;
  double h = 0.0;
  int dofs = 0;

  double total() const { return grad_sq[0] + grad_sq[1] + jump_sq + flux_sq; }
  double energy() const { return std::sqrt(total()); }
};

ErrorReport compute_errors(const Workspace& ws, const SolveOutput& out, const ManufacturedCase& mc,
                           int k);

/// Discrete-problem identity a_h(U,U) = l_h(U) (meaningful for homogeneous
/// Dirichlet data); returns the two numbers for comparison.
std::pair<double, double> energy_identity(const Workspace& ws, const SolveOutput& out);

struct StudyRow {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  ErrorReport err;
  double eoc = std::numeric_limits<double>::quiet_NaN();       // on sqrt(E)
  double jump_eoc = std::numeric_limits<double>::quiet_NaN();  // on sqrt(jump term)
};

std::vector<StudyRow> convergence_study(const ManufacturedCase& mc, std::span<const int> sizes,
                                        const PipelineOptions& opt);

struct SweepResult {
  std::vector<double> values;    // sweep parameter per run
  std::vector<double> energies;  // sqrt(E) per run
  double ratio = 0.0;            // max/min energy
  double worst_pivot_ratio = 0.0;
};

/// Translates the interface by eps*h along x for eps in `offsets` and reruns
/// the full pipeline; the spread of the energies measures cut robustness.
SweepResult cut_robustness_sweep(const ManufacturedCase& mc, int n, const PipelineOptions& opt,
                                 std::span<const double> offsets);

/// radial_circle at fixed kappa1 = 1 and the given contrasts kappa2/kappa1.
SweepResult contrast_sweep(double r0, int n, const PipelineOptions& opt,
                           std::span<const double> contrasts, const Rectangle& domain);

}  // namespace uhho
