#pragma once

#include "uhho/levelset.hpp"
#include "uhho/mesh.hpp"
#include "uhho/quadrature.hpp"

#include <optional>

namespace uhho {

enum class CellTag : unsigned char { Inside1 = 0, Inside2 = 1, Cut = 2 };

inline int side_of(CellTag t) { return t == CellTag::Inside2 ? 1 : 0; }

/// Root structure of the level set along one mesh face, parameterized by
/// t in [0,1] from v0 to v1. Uncut faces carry the side they belong to;
/// cut faces carry per-side sub-intervals (usually one each, two on the
/// same side when the interface enters and leaves through the same face).
struct FaceCutInfo {
  bool cut = false;
  int side = 0;  // only meaningful when !cut
  std::vector<double> roots;
  std::array<std::vector<std::array<double, 2>>, 2> intervals;
};

struct SubFace {
  int face = -1;
  std::vector<Segment> segs;
  double measure = 0.0;
};

/// Discretized geometry of one cut cell: per-side sub-polygons (one per
/// parent part), per-side sub-faces, and the interface polyline whose nodes
/// lie on {phi=0} exactly (up to the projection tolerance).
struct CutCellGeom {
  std::array<std::vector<Polygon>, 2> parts;
  std::array<std::vector<SubFace>, 2> subfaces;
  std::vector<Vec2> polyline;  // single connected chain
  std::array<double, 2> area = {0.0, 0.0};
};

struct CutTopology {
  std::vector<CellTag> tags;
  std::vector<FaceCutInfo> face_cuts;            // indexed by mesh face
  std::vector<std::optional<CutCellGeom>> cells;  // engaged iff tag == Cut
  int n_sub = 1;

  int num_cut() const;
};

/// Interface quadrature: projected Gauss nodes with their arc-length
/// Jacobian weights, plus the unit normal at every node.
struct InterfaceRule {
  QuadRule rule;
  std::vector<Vec2> normals;
};

std::vector<FaceCutInfo> compute_face_cuts(const PolyMesh& mesh, const LevelSet& ls, double tol_rel);

/// Tags every cell (Inside1/Inside2/Cut). `tol` is the absolute edge
/// root-finding tolerance relative to the cell size. Throws on tangential
/// cuts (phi vanishing along a whole face).
CutTopology classify_cells(const PolyMesh& mesh, const LevelSet& ls, double tol_rel = 1e-12);

/// Fills in sub-cells, sub-faces, and interface polylines for all cut cells.
/// Interior polyline nodes are projected onto {phi=0} by damped Newton.
/// Throws "unresolved interface" when a cell boundary is crossed more than
/// twice.
void build_subcells(const PolyMesh& mesh, const LevelSet& ls, CutTopology& topo, int n_sub,
                    int threads = 1);

InterfaceRule interface_quadrature(std::span<const Vec2> polyline, const LevelSet& ls, int order);

/// Volume rule over the side-i sub-region of a cut cell (or a whole cell when
/// given its polygon): fan/ear triangulation + positive triangle rules.
QuadRule subcell_quadrature(std::span<const Polygon> parts, int order);

struct GammaCheck {
  Vec2 x_hat = Vec2::Zero();
  double gamma = 0.0;
};

/// Diagnostic for the interface-resolution assumption: searches constructive
/// candidate points (offsets along the normal plus the sub-cell ball centers)
/// and reports the best achieved gamma. Throws if no candidate separates from
/// every sampled tangent line.
GammaCheck check_assumption_gamma(const CutCellGeom& geom, const LevelSet& ls, double h_T);

struct BallCheck {
  std::array<BallEstimate, 2> balls;
  std::array<bool, 2> pass = {true, true};
};

/// Per-side inscribed-ball test at threshold delta * h_T (grid resolution
/// h_T/64). Uncut cells pass by convention.
BallCheck check_assumption_ball(const CutCellGeom& geom, double delta, double h_T);

struct ResolutionCheck {
  bool pass = false;
  bool curvature_ok = false;
  bool boundary_clear = false;
  double h = 0.0;
  double hM = 0.0;
};

/// h*M <= 1 plus "no boundary-adjacent cell is cut" (operational surrogate
/// for the interface staying 2h away from the domain boundary).
ResolutionCheck check_resolution(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                 const LevelSet& ls, const CutTopology& topo);

}  // namespace uhho
