#pragma once

#include "uhho/agglomeration.hpp"
#include "uhho/basis.hpp"

namespace uhho {

/// One face-dof block of a local hybrid vector: a (face, side) pair. Uncut
/// cells carry their faces once; cut cells carry side-1 blocks first, then
/// side-2, each in the cell's face order (this is also the global gather
/// order).
struct FaceBlock {
  int face = -1;
  int side = 0;
};

struct LocalDofLayout {
  int k = 0;
  bool cut = false;
  int ncell = 0;  // dim P^{k+1}
  int nfb = 0;    // k+1
  std::vector<FaceBlock> face_blocks;

  int cell_dofs() const { return cut ? 2 * ncell : ncell; }
  int nloc() const { return cell_dofs() + nfb * static_cast<int>(face_blocks.size()); }
  int cell_offset(int side) const { return side == 0 ? 0 : ncell; }
  int face_offset(int i) const { return cell_dofs() + i * nfb; }
};

/// Volume data of the interface problem; null members mean zero.
struct ProblemData {
  std::function<double(const Vec2&, int)> f;  // side-indexed source
  std::function<double(const Vec2&)> g_dirichlet_jump;  // g_D on Gamma
  std::function<double(const Vec2&)> g_neumann_jump;    // g_N on Gamma
};

/// Geometry + quadrature context of one (possibly agglomerated) cell.
struct CellInput {
  int cell = -1;
  bool cut = false;
  int side = 0;  // uncut only
  double h = 0.0;
  Vec2 center = Vec2::Zero();
  std::array<double, 2> kappa = {1.0, 1.0};
  std::array<std::vector<Polygon>, 2> parts;
  std::array<QuadRule, 2> cellq;
  InterfaceRule ifq;  // cut only

  struct FaceData {
    int face = -1;
    int side = 0;
    std::vector<Segment> segs;
    Vec2 normal = Vec2::UnitX();  // outward, constant per face
    QuadRule rule;
  };
  std::vector<FaceData> faces;  // aligned with LocalDofLayout::face_blocks
};

CellInput gather_cell(const AggloMesh& am, const LevelSet& ls, int cell, int k,
                      std::array<double, 2> kappa);

/// Everything the global loop needs from one cell: reconstruction,
/// stabilization, local stiffness/RHS, and the static-condensation factors.
struct LocalOps {
  LocalDofLayout layout;
  std::array<CellBasis, 2> cb;
  std::vector<FaceBasis> fb;
  double eta = 0.0;

  Mat stiff;  // uncut: kappa-weighted stiffness on P^{k+1}(T); cut: Nitsche form
  Mat nt_semi;  // cut: matrix of the |.|_{n_T} semi-norm on the cell pair
  Mat recon;    // cell-space x nloc
  Mat stab;     // nloc x nloc
  Mat A;        // nloc x nloc, symmetric PSD
  Vec rhs;

  Mat scond;    // Schur complement on the face dofs
  Vec rcond;
  Mat recov_K;  // cell dofs = recov_r - recov_K * face dofs
  Vec recov_r;

  /// Matrix of the stability semi-norm |.|_{a_T}^2 on the local dofs.
  Mat seminorm_matrix() const;
};

double calibrate_eta(const CellBasis& cb1, const InterfaceRule& ifq, double h, int k);

Mat nitsche_matrix(const CellInput& in, const CellBasis& cb1, const CellBasis& cb2, double eta,
                   Mat* semi_out = nullptr);

Mat reconstruction_uncut(const CellInput& in, const CellBasis& cb, const std::vector<FaceBasis>& fb,
                         const LocalDofLayout& layout, const Mat& stiff);
Mat reconstruction_cut(const CellInput& in, const std::array<CellBasis, 2>& cb,
                       const std::vector<FaceBasis>& fb, const LocalDofLayout& layout,
                       const Mat& nitsche);

Mat stabilization(const CellInput& in, const std::array<CellBasis, 2>& cb,
                  const std::vector<FaceBasis>& fb, const LocalDofLayout& layout);

/// Builds the complete operator set for one cell. `eta_override > 0` replaces
/// the calibrated per-cell penalty. `data` may be null (zero RHS).
LocalOps build_local_ops(const CellInput& in, int k, double eta_override, const ProblemData* data);

/// Static condensation of the cell block; fills scond/rcond/recov_*.
void condense(LocalOps& ops);

}  // namespace uhho
