#pragma once

#include "uhho/cut.hpp"

namespace uhho {

/// OK / KO,1 / KO,2 census of the cut cells at cut threshold delta.
struct CutPartition {
  double delta = 0.0;
  std::vector<int> class_of;  // per cell: -1 uncut, 0 OK, 1 KO1, 2 KO2
  std::vector<int> ok, ko1, ko2;
  std::vector<std::array<BallEstimate, 2>> balls;  // per cell, valid for cut cells
};

CutPartition partition_cut_cells(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                 const CutTopology& topo, double delta);

struct NeighborSelection {
  std::vector<std::pair<int, int>> merges;  // (KO cell, chosen companion)
  std::vector<int> hat_ko2;                 // KO2 cells already chosen in step (1)
};

/// Companion choice for every badly cut cell: step (1) serves KO1, step (2)
/// the KO2 cells not absorbed in step (1). Tie-breaking prefers face-sharing
/// neighbors, then the largest inscribed ball on the relevant side, then the
/// lowest cell index.
NeighborSelection select_neighbors(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                   const CutTopology& topo, const CutPartition& part);

/// Mesh after cell agglomeration. Cells are unions of base cells (stored as
/// multi-polygons); faces interior to an agglomerate are removed from the
/// skeleton and their unknowns disappear. Also carries the merged cut
/// topology, so this is the complete solver input.
struct AggloMesh {
  const PolyMesh* base = nullptr;
  std::vector<std::vector<int>> members;  // per cell, sorted base cell ids
  std::vector<int> seed;                  // designated T# (base id)
  std::vector<int> parent_to_cell;
  std::vector<char> face_alive;
  std::vector<std::vector<int>> cell_faces;    // alive base faces, canonical order
  std::vector<std::array<int, 2>> face_cells;  // per base face: adjacent agglo cells
  std::vector<CellMeta> meta;
  std::vector<CellTag> tags;
  std::vector<FaceCutInfo> face_cuts;
  std::vector<std::optional<CutCellGeom>> cut_geo;
  int n_sub = 1;

  int num_cells() const { return static_cast<int>(members.size()); }
  std::vector<Polygon> cell_parts(int c) const;
};

/// Identity wrapper: every base cell survives unmerged.
AggloMesh trivial_agglomeration(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                const CutTopology& topo);

/// Step (3): forms the agglomerates, recomputes the cut topology on them
/// (unions of sub-geometries, interior faces dropped), and asserts that every
/// cut cell of the result passes the ball check at delta_star.
AggloMesh agglomerate(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                      const CutTopology& topo, const CutPartition& part,
                      const NeighborSelection& sel, double delta_star);

}  // namespace uhho
