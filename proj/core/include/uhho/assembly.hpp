#pragma once

#include "uhho/hho.hpp"

#include <Eigen/Sparse>

namespace uhho {

using SpMat = Eigen::SparseMatrix<double>;

/// Face-dof bookkeeping on the agglomerated skeleton. Interior uncut faces
/// carry one block of k+1 dofs, cut faces two (side 1, then side 2), boundary
/// faces are eliminated (Dirichlet). Numbering is lexicographic by face index
/// then side.
struct GlobalDofMap {
  struct Block {
    int face = -1;
    int side = 0;
    bool eliminated = false;
    int active_offset = -1;  // offset into the active dof vector
  };

  int k = 0;
  int nfb = 0;
  std::vector<std::array<int, 2>> block_of;  // per base face, per side; -1 if absent
  std::vector<Block> blocks;
  int n_active = 0;
  Vec prescribed;  // full block-indexed vector; nonzero only on eliminated blocks

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  /// Block ids in the local face order of a cell's layout.
  std::vector<int> gather_blocks(const LocalDofLayout& layout) const;
};

GlobalDofMap build_dof_map(const AggloMesh& am, int k);

struct SkeletonSystem {
  SpMat A;
  Vec b;
  int n = 0;
};

SkeletonSystem assemble(const AggloMesh& am, const std::vector<LocalOps>& locals,
                        const GlobalDofMap& dofs);

struct SolveStats {
  int n = 0;
  long nnz = 0;
  double residual = 0.0;
  double pivot_min = 0.0;
  double pivot_max = 0.0;
};

/// Direct sparse symmetric solve; the factorization must meet the 1e-10
/// relative residual contract or this throws with pivot diagnostics.
Vec solve(const SkeletonSystem& sys, SolveStats* stats = nullptr);

struct HybridSolution {
  std::vector<Vec> cell_dofs;  // per agglomerated cell
  Vec face_full;               // all face blocks (active + prescribed values)
};

HybridSolution recover(const AggloMesh& am, const std::vector<LocalOps>& locals,
                       const GlobalDofMap& dofs, const Vec& x);

/// Local face values of a solution in the layout order of `ops`.
Vec gather_faces(const GlobalDofMap& dofs, const LocalDofLayout& layout, const Vec& face_full);

}  // namespace uhho
