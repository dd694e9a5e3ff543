#include "uhho/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace uhho {

std::vector<int> GlobalDofMap::gather_blocks(const LocalDofLayout& layout) const {
  std::vector<int> out;
  out.reserve(layout.face_blocks.size());
  for (const auto& fb : layout.face_blocks) {
    const int b = block_of[static_cast<size_t>(fb.face)][static_cast<size_t>(fb.side)];
    if (b < 0) throw std::logic_error("gather_blocks: missing face block");
    out.push_back(b);
  }
  return out;
}

GlobalDofMap build_dof_map(const AggloMesh& am, int k) {
  GlobalDofMap dm;
  dm.k = k;
  dm.nfb = k + 1;
  dm.block_of.assign(static_cast<size_t>(am.base->num_faces()), {-1, -1});
  for (int f = 0; f < am.base->num_faces(); ++f) {
    if (!am.face_alive[static_cast<size_t>(f)]) continue;
    const FaceCutInfo& info = am.face_cuts[static_cast<size_t>(f)];
    const bool boundary = am.base->faces[static_cast<size_t>(f)].boundary();
    if (info.cut && boundary)
      throw std::runtime_error("build_dof_map: boundary face " + std::to_string(f) +
                               " is cut by the interface (resolution requirement violated)");
    if (info.cut) {
      for (int sd = 0; sd < 2; ++sd) {
        dm.block_of[static_cast<size_t>(f)][static_cast<size_t>(sd)] = dm.num_blocks();
        dm.blocks.push_back({f, sd, false, -1});
      }
    } else {
      dm.block_of[static_cast<size_t>(f)][static_cast<size_t>(info.side)] = dm.num_blocks();
      dm.blocks.push_back({f, info.side, boundary, -1});
    }
  }
  for (auto& b : dm.blocks)
    if (!b.eliminated) {
      b.active_offset = dm.n_active;
      dm.n_active += dm.nfb;
    }
  dm.prescribed = Vec::Zero(static_cast<long>(dm.num_blocks()) * dm.nfb);
  return dm;
}

SkeletonSystem assemble(const AggloMesh& am, const std::vector<LocalOps>& locals,
                        const GlobalDofMap& dofs) {
  SkeletonSystem sys;
  sys.n = dofs.n_active;
  sys.b = Vec::Zero(sys.n);
  std::vector<Eigen::Triplet<double>> trips;

  for (int c = 0; c < am.num_cells(); ++c) {
    const LocalOps& ops = locals[static_cast<size_t>(c)];
    const std::vector<int> blocks = dofs.gather_blocks(ops.layout);
    const int nb = static_cast<int>(blocks.size());
    const int nfb = dofs.nfb;
    for (int bi = 0; bi < nb; ++bi) {
      const auto& rb = dofs.blocks[static_cast<size_t>(blocks[static_cast<size_t>(bi)])];
      if (rb.eliminated) continue;
      for (int i = 0; i < nfb; ++i) {
        const int gr = rb.active_offset + i;
        sys.b[gr] += ops.rcond[bi * nfb + i];
        for (int bj = 0; bj < nb; ++bj) {
          const auto& cb = dofs.blocks[static_cast<size_t>(blocks[static_cast<size_t>(bj)])];
          for (int j = 0; j < nfb; ++j) {
            const double v = ops.scond(bi * nfb + i, bj * nfb + j);
            if (v == 0.0) continue;
            if (cb.eliminated) {
              const double g =
                  dofs.prescribed[static_cast<long>(blocks[static_cast<size_t>(bj)]) * nfb + j];
              if (g != 0.0) sys.b[gr] -= v * g;
            } else {
              trips.emplace_back(gr, cb.active_offset + j, v);
            }
          }
        }
      }
    }
  }
  sys.A.resize(sys.n, sys.n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  return sys;
}

Vec solve(const SkeletonSystem& sys, SolveStats* stats) {
  if (sys.n == 0) {
    if (stats) *stats = {};
    return Vec();
  }
  Eigen::SimplicialLDLT<SpMat> ldlt(sys.A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse factorization breakdown (matrix not SPD?)");
  const Vec x = ldlt.solve(sys.b);
  const Vec d = ldlt.vectorD();
  SolveStats st;
  st.n = sys.n;
  st.nnz = sys.A.nonZeros();
  st.pivot_min = d.minCoeff();
  st.pivot_max = d.maxCoeff();
  const double bnorm = sys.b.norm();
  st.residual = (sys.A * x - sys.b).norm() / (bnorm > 0.0 ? bnorm : 1.0);
  if (stats) *stats = st;
  if (st.pivot_min <= 0.0)
    throw std::runtime_error("solve: nonpositive pivot " + std::to_string(st.pivot_min) +
                             " (system not positive definite)");
  if (st.residual > 1e-10)
    throw std::runtime_error("solve: residual contract violated, ||Ax-b||/||b|| = " +
                             std::to_string(st.residual));
  return x;
}

Vec gather_faces(const GlobalDofMap& dofs, const LocalDofLayout& layout, const Vec& face_full) {
  const std::vector<int> blocks = dofs.gather_blocks(layout);
  Vec uf(static_cast<long>(blocks.size()) * dofs.nfb);
  for (size_t i = 0; i < blocks.size(); ++i)
    uf.segment(static_cast<long>(i) * dofs.nfb, dofs.nfb) =
        face_full.segment(static_cast<long>(blocks[i]) * dofs.nfb, dofs.nfb);
  return uf;
}

HybridSolution recover(const AggloMesh& am, const std::vector<LocalOps>& locals,
                       const GlobalDofMap& dofs, const Vec& x) {
  HybridSolution sol;
  sol.face_full = dofs.prescribed;
  for (const auto& b : dofs.blocks) {
    if (b.eliminated) continue;
    const long off = (&b - dofs.blocks.data()) * static_cast<long>(dofs.nfb);
    sol.face_full.segment(off, dofs.nfb) = x.segment(b.active_offset, dofs.nfb);
  }
  sol.cell_dofs.resize(static_cast<size_t>(am.num_cells()));
  for (int c = 0; c < am.num_cells(); ++c) {
    const LocalOps& ops = locals[static_cast<size_t>(c)];
    const Vec uf = gather_faces(dofs, ops.layout, sol.face_full);
    sol.cell_dofs[static_cast<size_t>(c)] = ops.recov_r - ops.recov_K * uf;
  }
  return sol;
}

}  // namespace uhho
