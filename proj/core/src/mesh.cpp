#include "uhho/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace uhho {

Polygon PolyMesh::cell_polygon(int c) const {
  Polygon p;
  for (int v : cell_vertices[static_cast<size_t>(c)]) p.pts.push_back(vertices[static_cast<size_t>(v)]);
  return p;
}

Segment PolyMesh::face_segment(int f) const {
  const Face& fc = faces[static_cast<size_t>(f)];
  return {vertices[static_cast<size_t>(fc.v0)], vertices[static_cast<size_t>(fc.v1)]};
}

double PolyMesh::face_length(int f) const { return segment_length(face_segment(f)); }

Vec2 PolyMesh::face_outward_normal(int f, int c) const {
  const Face& fc = faces[static_cast<size_t>(f)];
  const Vec2 t = (vertices[static_cast<size_t>(fc.v1)] - vertices[static_cast<size_t>(fc.v0)]).normalized();
  // For the left cell (CCW traversal v0->v1) the outward normal is t rotated -90 deg.
  Vec2 n(t.y(), -t.x());
  if (fc.left == c) return n;
  if (fc.right == c) return -n;
  throw std::logic_error("face_outward_normal: cell not adjacent to face");
}

PolyMesh build_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells) {
  PolyMesh m;
  m.vertices = std::move(vertices);
  m.cell_vertices = std::move(cells);

  double total_area = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& loop = m.cell_vertices[static_cast<size_t>(c)];
    if (loop.size() < 3) throw std::runtime_error("build_mesh: cell with fewer than 3 vertices");
    for (int v : loop)
      if (v < 0 || v >= m.num_vertices()) throw std::runtime_error("build_mesh: vertex index out of range");
    Polygon p = m.cell_polygon(c);
    const double a = polygon_area(p);
    if (a <= 0.0) throw std::runtime_error("build_mesh: cell is not counter-clockwise or has nonpositive area");
    if (!polygon_is_simple(p)) throw std::runtime_error("build_mesh: cell polygon is not simple");
    total_area += a;
  }
  m.domain_area = total_area;

  std::map<std::pair<int, int>, int> face_of;
  m.cell_faces.assign(m.cell_vertices.size(), {});
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& loop = m.cell_vertices[static_cast<size_t>(c)];
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const int a = loop[static_cast<size_t>(i)];
      const int b = loop[static_cast<size_t>((i + 1) % n)];
      const auto key = std::minmax(a, b);
      auto it = face_of.find(key);
      if (it == face_of.end()) {
        PolyMesh::Face f;
        f.v0 = a;
        f.v1 = b;
        f.left = c;
        m.faces.push_back(f);
        face_of.emplace(key, m.num_faces() - 1);
        m.cell_faces[static_cast<size_t>(c)].push_back(m.num_faces() - 1);
      } else {
        PolyMesh::Face& f = m.faces[static_cast<size_t>(it->second)];
        if (f.right != -1) throw std::runtime_error("build_mesh: face shared by more than two cells");
        if (f.v0 != b || f.v1 != a)
          throw std::runtime_error("build_mesh: inconsistent face orientation between adjacent cells");
        f.right = c;
        m.cell_faces[static_cast<size_t>(c)].push_back(it->second);
      }
    }
  }
  return m;
}

PolyMesh generate_cartesian(int nx, int ny, const Rectangle& dom) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_cartesian: nx, ny must be >= 1");
  if (!(dom.width() > 0.0) || !(dom.height() > 0.0))
    throw std::invalid_argument("generate_cartesian: degenerate rectangle");

  std::vector<Vec2> verts;
  verts.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.emplace_back(dom.xmin + dom.width() * i / nx, dom.ymin + dom.height() * j / ny);

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});

  PolyMesh m = build_mesh(std::move(verts), std::move(cells));
  m.domain_area = dom.width() * dom.height();
  return m;
}

void perturb_vertices(PolyMesh& mesh, double amplitude, unsigned long long seed) {
  if (amplitude == 0.0) return;
  if (amplitude < 0.0 || amplitude > 0.2)
    throw std::invalid_argument("perturb_vertices: amplitude must lie in [0, 0.2]");

  std::vector<char> on_boundary(static_cast<size_t>(mesh.num_vertices()), 0);
  std::vector<double> spacing(static_cast<size_t>(mesh.num_vertices()),
                              std::numeric_limits<double>::infinity());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.faces[static_cast<size_t>(f)];
    const double len = mesh.face_length(f);
    spacing[static_cast<size_t>(fc.v0)] = std::min(spacing[static_cast<size_t>(fc.v0)], len);
    spacing[static_cast<size_t>(fc.v1)] = std::min(spacing[static_cast<size_t>(fc.v1)], len);
    if (fc.boundary()) {
      on_boundary[static_cast<size_t>(fc.v0)] = 1;
      on_boundary[static_cast<size_t>(fc.v1)] = 1;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double dx = u(rng), dy = u(rng);  // always draw: keeps the stream per-vertex
    if (on_boundary[static_cast<size_t>(v)]) continue;
    mesh.vertices[static_cast<size_t>(v)] += amplitude * spacing[static_cast<size_t>(v)] * Vec2(dx, dy);
  }
  // connectivity is unchanged; re-validate geometry
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Polygon p = mesh.cell_polygon(c);
    if (polygon_area(p) <= 0.0 || !polygon_is_simple(p))
      throw std::runtime_error("perturb_vertices: perturbation produced an invalid cell");
  }
}

std::vector<CellMeta> compute_meta(const PolyMesh& mesh) {
  std::vector<CellMeta> meta(static_cast<size_t>(mesh.num_cells()));

  std::vector<std::vector<int>> cells_of_vertex(static_cast<size_t>(mesh.num_vertices()));
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int v : mesh.cell_vertices[static_cast<size_t>(c)])
      cells_of_vertex[static_cast<size_t>(v)].push_back(c);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellMeta& mt = meta[static_cast<size_t>(c)];
    const Polygon p = mesh.cell_polygon(c);
    mt.h = polygon_diameter(p);
    const auto edges = polygon_edges(p);
    const Polygon parts[1] = {p};
    const BallEstimate ball = inscribed_ball(parts, edges, mt.h / 64.0);
    mt.x_in = ball.center;
    mt.r_in = ball.radius;

    std::vector<char> seen(static_cast<size_t>(mesh.num_cells()), 0);
    for (int v : mesh.cell_vertices[static_cast<size_t>(c)])
      for (int nb : cells_of_vertex[static_cast<size_t>(v)])
        if (!seen[static_cast<size_t>(nb)]) {
          seen[static_cast<size_t>(nb)] = 1;
          mt.delta.push_back(nb);
        }
    std::sort(mt.delta.begin(), mt.delta.end());
  }
  return meta;
}

double estimate_rho(const PolyMesh& mesh, const std::vector<CellMeta>& meta) {
  double rho = 1.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellMeta& mt = meta[static_cast<size_t>(c)];
    rho = std::min(rho, mt.r_in / mt.h);
    double hmin = mt.h, hmax = mt.h;
    for (int nb : mt.delta) {
      hmin = std::min(hmin, meta[static_cast<size_t>(nb)].h);
      hmax = std::max(hmax, meta[static_cast<size_t>(nb)].h);
    }
    rho = std::min(rho, hmin / hmax);
  }
  return rho;
}

void write_mesh(std::ostream& os, const PolyMesh& mesh) {
  os << "polymesh 2d\n" << mesh.num_vertices() << "\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) os << v.x() << " " << v.y() << "\n";
  os << mesh.num_cells() << "\n";
  for (const auto& loop : mesh.cell_vertices) {
    os << loop.size();
    for (int v : loop) os << " " << v;
    os << "\n";
  }
}

PolyMesh read_mesh(std::istream& is) {
  std::string word, dim;
  is >> word >> dim;
  if (!is || word != "polymesh" || dim != "2d")
    throw std::runtime_error("read_mesh: expected 'polymesh 2d' header");
  int nv = 0;
  is >> nv;
  if (!is || nv < 3) throw std::runtime_error("read_mesh: bad vertex count");
  std::vector<Vec2> verts(static_cast<size_t>(nv));
  for (auto& v : verts) {
    is >> v.x() >> v.y();
    if (!is) throw std::runtime_error("read_mesh: truncated vertex list");
  }
  int nc = 0;
  is >> nc;
  if (!is || nc < 1) throw std::runtime_error("read_mesh: bad cell count");
  std::vector<std::vector<int>> cells(static_cast<size_t>(nc));
  for (auto& loop : cells) {
    int n = 0;
    is >> n;
    if (!is || n < 3) throw std::runtime_error("read_mesh: bad cell vertex count");
    loop.resize(static_cast<size_t>(n));
    for (auto& v : loop) {
      is >> v;
      if (!is) throw std::runtime_error("read_mesh: truncated cell list");
    }
  }
  return build_mesh(std::move(verts), std::move(cells));
}

void write_mesh_file(const std::string& path, const PolyMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_mesh_file: cannot open " + path);
  write_mesh(os, mesh);
}

PolyMesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_mesh_file: cannot open " + path);
  return read_mesh(is);
}

}  // namespace uhho
