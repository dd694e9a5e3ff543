#pragma once

#include "uhho/geometry.hpp"

#include <iosfwd>
#include <string>

namespace uhho {

/// Planar polygonal mesh. Cells are simple CCW vertex loops; faces are the
/// edge skeleton with a fixed orientation (v0->v1 with `left` the cell that
/// traverses the edge in that direction). Immutable once built.
struct PolyMesh {
  struct Face {
    int v0 = -1, v1 = -1;
    int left = -1, right = -1;  // right == -1 on the boundary

    bool boundary() const { return right < 0; }
  };

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cell_vertices;  // CCW loops
  std::vector<Face> faces;
  std::vector<std::vector<int>> cell_faces;  // loop order: face i joins loop vertex i and i+1
  double domain_area = 0.0;                  // |Omega|; sum of cell areas for imported meshes

  int num_cells() const { return static_cast<int>(cell_vertices.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  Polygon cell_polygon(int c) const;
  Segment face_segment(int f) const;
  double face_length(int f) const;
  /// Unit normal of face `f` pointing out of cell `c` (must be adjacent).
  Vec2 face_outward_normal(int f, int c) const;
};

struct CellMeta {
  double h = 0.0;           // diameter
  Vec2 x_in = Vec2::Zero();  // inscribed-ball center estimate
  double r_in = 0.0;         // inscribed-ball radius estimate (lower bound)
  std::vector<int> delta;    // vertex-neighbor set, includes the cell itself
};

struct Rectangle {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

PolyMesh generate_cartesian(int nx, int ny, const Rectangle& dom);

/// Deterministic interior-vertex jiggle; `amplitude` is relative to the local
/// grid spacing and must stay <= 0.2 to keep cells simple. Boundary vertices
/// are left in place so the mesh still tiles the domain exactly.
void perturb_vertices(PolyMesh& mesh, double amplitude, unsigned long long seed);

/// Builds connectivity from vertices + cell loops and validates the mesh
/// invariants (simplicity, orientation, positive areas, 1-2 cells per face).
PolyMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

std::vector<CellMeta> compute_meta(const PolyMesh& mesh);

/// Achieved shape-regularity ratio: min over cells of the inscribed-ball
/// ratio r_T/h_T and of the neighborhood size ratio min h / max h over
/// Delta(T).
double estimate_rho(const PolyMesh& mesh, const std::vector<CellMeta>& meta);

// Plain-text mesh format ("polymesh 2d" header); grammar in docs/formats.md.
void write_mesh(std::ostream& os, const PolyMesh& mesh);
PolyMesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const PolyMesh& mesh);
PolyMesh read_mesh_file(const std::string& path);

}  // namespace uhho
