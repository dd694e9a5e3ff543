#include "uhho/cut.hpp"

#include "uhho/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uhho {

namespace {

constexpr int kFaceSamples = 64;     // sign-sampling intervals per face
constexpr double kSnapTol = 1e-10;   // relative; sub-face pieces below this are dropped
constexpr double kBisectTol = 1e-13; // relative root localization along a face

double grad_scale(const LevelSet& ls, const Vec2& a, const Vec2& b) {
  double g = 0.0;
  for (double t : {0.0, 0.5, 1.0}) g = std::max(g, ls.gradient(a + t * (b - a)).norm());
  return std::max(g, 1e-300);
}

double bisect_root(const LevelSet& ls, const Vec2& a, const Vec2& b, double t0, double f0, double t1) {
  for (int it = 0; it < 60 && (t1 - t0) > kBisectTol; ++it) {
    const double tm = 0.5 * (t0 + t1);
    const double fm = ls.phi(a + tm * (b - a));
    if ((fm > 0.0) == (f0 > 0.0)) {
      t0 = tm;
      f0 = fm;
    } else {
      t1 = tm;
    }
  }
  return 0.5 * (t0 + t1);
}

FaceCutInfo cut_one_face(const PolyMesh& mesh, const LevelSet& ls, int f, double tol_rel) {
  const Segment s = mesh.face_segment(f);
  const Vec2 a = s[0], b = s[1];
  const double len = (b - a).norm();
  const double tol_phi = std::max(tol_rel, 1e-14) * len * grad_scale(ls, a, b);

  std::array<double, kFaceSamples + 1> vals;
  double max_abs = 0.0;
  for (int i = 0; i <= kFaceSamples; ++i) {
    vals[static_cast<size_t>(i)] = ls.phi(a + (static_cast<double>(i) / kFaceSamples) * (b - a));
    max_abs = std::max(max_abs, std::abs(vals[static_cast<size_t>(i)]));
  }
  if (max_abs <= tol_phi)
    throw std::runtime_error("tangential cut: level set vanishes along face " + std::to_string(f) +
                             "; refine or perturb the mesh");

  std::vector<double> roots;
  for (int i = 0; i < kFaceSamples; ++i) {
    const double f0 = vals[static_cast<size_t>(i)];
    const double f1 = vals[static_cast<size_t>(i + 1)];
    if ((f0 > 0.0) != (f1 > 0.0))
      roots.push_back(bisect_root(ls, a, b, static_cast<double>(i) / kFaceSamples, f0,
                                  static_cast<double>(i + 1) / kFaceSamples));
  }

  // Drop zero-measure pieces: roots hugging a vertex, and root pairs closer
  // than the snap tolerance (tangent grazes).
  std::erase_if(roots, [](double t) { return t < kSnapTol || t > 1.0 - kSnapTol; });
  for (size_t i = 0; i + 1 < roots.size();) {
    if (roots[i + 1] - roots[i] < kSnapTol)
      roots.erase(roots.begin() + static_cast<long>(i), roots.begin() + static_cast<long>(i) + 2);
    else
      ++i;
  }

  FaceCutInfo info;
  info.roots = roots;
  std::vector<double> brk = {0.0};
  brk.insert(brk.end(), roots.begin(), roots.end());
  brk.push_back(1.0);
  for (size_t i = 0; i + 1 < brk.size(); ++i) {
    const double tm = 0.5 * (brk[i] + brk[i + 1]);
    const int side = ls.phi(a + tm * (b - a)) > 0.0 ? 1 : 0;
    auto& iv = info.intervals[static_cast<size_t>(side)];
    if (!iv.empty() && std::abs(iv.back()[1] - brk[i]) < 1e-300)
      iv.back()[1] = brk[i + 1];  // merge contiguous same-side pieces
    else
      iv.push_back({brk[i], brk[i + 1]});
  }
  info.cut = !info.intervals[0].empty() && !info.intervals[1].empty();
  if (!info.cut) {
    info.side = info.intervals[0].empty() ? 1 : 0;
    info.roots.clear();
    info.intervals[static_cast<size_t>(info.side)] = {{0.0, 1.0}};
    info.intervals[static_cast<size_t>(1 - info.side)].clear();
  }
  return info;
}

}  // namespace

int CutTopology::num_cut() const {
  int n = 0;
  for (auto t : tags) n += (t == CellTag::Cut) ? 1 : 0;
  return n;
}

std::vector<FaceCutInfo> compute_face_cuts(const PolyMesh& mesh, const LevelSet& ls, double tol_rel) {
  std::vector<FaceCutInfo> cuts(static_cast<size_t>(mesh.num_faces()));
  for (int f = 0; f < mesh.num_faces(); ++f) cuts[static_cast<size_t>(f)] = cut_one_face(mesh, ls, f, tol_rel);
  return cuts;
}

CutTopology classify_cells(const PolyMesh& mesh, const LevelSet& ls, double tol_rel) {
  CutTopology topo;
  topo.face_cuts = compute_face_cuts(mesh, ls, tol_rel);
  topo.tags.assign(static_cast<size_t>(mesh.num_cells()), CellTag::Inside1);
  topo.cells.assign(static_cast<size_t>(mesh.num_cells()), std::nullopt);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    bool any_cut = false;
    int side = -1;
    bool mixed = false;
    for (int f : mesh.cell_faces[static_cast<size_t>(c)]) {
      const FaceCutInfo& fc = topo.face_cuts[static_cast<size_t>(f)];
      if (fc.cut) {
        any_cut = true;
        break;
      }
      if (side < 0)
        side = fc.side;
      else if (side != fc.side)
        mixed = true;
    }
    if (any_cut || mixed) {
      topo.tags[static_cast<size_t>(c)] = CellTag::Cut;
      continue;
    }
    // all faces on one side; cross-check the centroid against a closed
    // interface component hiding inside the cell
    const Polygon p = mesh.cell_polygon(c);
    const Vec2 xc = polygon_centroid(p);
    const int cside = ls.phi(xc) > 0.0 ? 1 : 0;
    if (cside != side) {
      const double scale = polygon_diameter(p) * ls.gradient(xc).norm();
      if (std::abs(ls.phi(xc)) > 1e-8 * scale)
        throw std::runtime_error("unresolved interface: closed component inside cell " +
                                 std::to_string(c) + "; refine the mesh");
    }
    topo.tags[static_cast<size_t>(c)] = side == 0 ? CellTag::Inside1 : CellTag::Inside2;
  }
  return topo;
}

namespace {

struct Piece {
  int face_pos;  // position in cell_faces
  int face;
  int side;
  Vec2 p0, p1;
  std::array<double, 2> tface;  // interval in face parameterization (may be reversed)
};

// Walks the cell boundary in loop order, splitting edges at their interface
// roots, and returns the ordered pieces with side labels.
std::vector<Piece> boundary_pieces(const PolyMesh& mesh, const CutTopology& topo, int c) {
  std::vector<Piece> pieces;
  const auto& loop = mesh.cell_vertices[static_cast<size_t>(c)];
  const auto& cfaces = mesh.cell_faces[static_cast<size_t>(c)];
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const int f = cfaces[static_cast<size_t>(i)];
    const PolyMesh::Face& fc = mesh.faces[static_cast<size_t>(f)];
    const bool forward = fc.v0 == loop[static_cast<size_t>(i)];
    const FaceCutInfo& info = topo.face_cuts[static_cast<size_t>(f)];
    const Vec2 va = mesh.vertices[static_cast<size_t>(fc.v0)];
    const Vec2 vb = mesh.vertices[static_cast<size_t>(fc.v1)];

    // breakpoints in face parameterization
    std::vector<double> brk = {0.0};
    brk.insert(brk.end(), info.roots.begin(), info.roots.end());
    brk.push_back(1.0);
    const int np = static_cast<int>(brk.size()) - 1;
    for (int kk = 0; kk < np; ++kk) {
      const int j = forward ? kk : np - 1 - kk;
      const double t0 = brk[static_cast<size_t>(j)];
      const double t1 = brk[static_cast<size_t>(j + 1)];
      int side = -1;
      for (int sd = 0; sd < 2 && side < 0; ++sd)
        for (const auto& iv : info.intervals[static_cast<size_t>(sd)])
          if (t0 >= iv[0] - 1e-14 && t1 <= iv[1] + 1e-14) {
            side = sd;
            break;
          }
      if (side < 0) throw std::logic_error("boundary_pieces: interval bookkeeping failure");
      Piece pc;
      pc.face_pos = i;
      pc.face = f;
      pc.side = side;
      pc.tface = {t0, t1};
      const Vec2 q0 = va + t0 * (vb - va);
      const Vec2 q1 = va + t1 * (vb - va);
      pc.p0 = forward ? q0 : q1;
      pc.p1 = forward ? q1 : q0;
      pieces.push_back(pc);
    }
  }
  return pieces;
}

CutCellGeom build_one_cut_cell(const PolyMesh& mesh, const LevelSet& ls, const CutTopology& topo,
                               int c, double h_T, int n_sub) {
  const std::vector<Piece> pieces = boundary_pieces(mesh, topo, c);
  const int np = static_cast<int>(pieces.size());

  std::vector<int> crossings;  // crossing after pieces[i], at pieces[i].p1
  for (int i = 0; i < np; ++i)
    if (pieces[static_cast<size_t>(i)].side != pieces[static_cast<size_t>((i + 1) % np)].side)
      crossings.push_back(i);
  if (crossings.size() != 2)
    throw std::runtime_error("unresolved interface: boundary of cell " + std::to_string(c) +
                             " crossed " + std::to_string(crossings.size()) +
                             " times; refine the mesh");

  const int c0 = crossings[0], c1 = crossings[1];
  const Vec2 x0 = pieces[static_cast<size_t>(c0)].p1;
  const Vec2 x1 = pieces[static_cast<size_t>(c1)].p1;

  // interface polyline from x0 to x1: chord nodes projected onto {phi=0}
  std::vector<Vec2> poly(static_cast<size_t>(n_sub) + 1);
  poly.front() = x0;
  poly.back() = x1;
  for (int j = 1; j < n_sub; ++j) {
    const Vec2 chord = x0 + (static_cast<double>(j) / n_sub) * (x1 - x0);
    const double tol = kBisectTol * h_T * std::max(ls.gradient(chord).norm(), 1e-300);
    poly[static_cast<size_t>(j)] = project_to_interface(ls, chord, tol);
  }

  CutCellGeom geom;
  geom.polyline = poly;

  // arc A: pieces c0+1 .. c1 (one side); arc B: the rest
  auto arc_points = [&](int from, int to) {  // inclusive piece range, wrapping
    std::vector<Vec2> pts;
    pts.push_back(pieces[static_cast<size_t>(from)].p0);
    for (int i = from;; i = (i + 1) % np) {
      pts.push_back(pieces[static_cast<size_t>(i)].p1);
      if (i == to) break;
    }
    return pts;
  };
  const int sideA = pieces[static_cast<size_t>((c0 + 1) % np)].side;
  const int sideB = 1 - sideA;

  Polygon pa, pb;
  pa.pts = arc_points((c0 + 1) % np, c1);  // runs x0 -> x1 along the boundary
  for (int j = n_sub - 1; j >= 1; --j) pa.pts.push_back(poly[static_cast<size_t>(j)]);
  pb.pts = arc_points((c1 + 1) % np, c0);  // runs x1 -> x0
  for (int j = 1; j <= n_sub - 1; ++j) pb.pts.push_back(poly[static_cast<size_t>(j)]);

  geom.parts[static_cast<size_t>(sideA)].push_back(pa);
  geom.parts[static_cast<size_t>(sideB)].push_back(pb);
  geom.area[static_cast<size_t>(sideA)] = polygon_area(pa);
  geom.area[static_cast<size_t>(sideB)] = polygon_area(pb);

  const double cell_area = polygon_area(mesh.cell_polygon(c));
  if (std::abs(geom.area[0] + geom.area[1] - cell_area) > 1e-10 * cell_area)
    throw std::runtime_error("build_subcells: sub-cell areas do not partition cell " +
                             std::to_string(c));

  // sub-faces per face in loop order, segments in the canonical face
  // orientation (v0 -> v1) so both adjacent cells agree on the frame
  for (int sd = 0; sd < 2; ++sd) {
    for (int f : mesh.cell_faces[static_cast<size_t>(c)]) {
      const FaceCutInfo& info = topo.face_cuts[static_cast<size_t>(f)];
      const Segment s = mesh.face_segment(f);
      SubFace sf;
      sf.face = f;
      for (const auto& iv : info.intervals[static_cast<size_t>(sd)]) {
        sf.segs.push_back({s[0] + iv[0] * (s[1] - s[0]), s[0] + iv[1] * (s[1] - s[0])});
        sf.measure += segment_length(sf.segs.back());
      }
      if (!sf.segs.empty()) geom.subfaces[static_cast<size_t>(sd)].push_back(std::move(sf));
    }
  }
  return geom;
}

}  // namespace

void build_subcells(const PolyMesh& mesh, const LevelSet& ls, CutTopology& topo, int n_sub,
                    int threads) {
  if (n_sub < 1) throw std::invalid_argument("build_subcells: n_sub must be >= 1");
  topo.n_sub = n_sub;
  topo.cells.assign(static_cast<size_t>(mesh.num_cells()), std::nullopt);
  parallel_for(mesh.num_cells(), threads, [&](int c) {
    if (topo.tags[static_cast<size_t>(c)] != CellTag::Cut) return;
    const double h_T = polygon_diameter(mesh.cell_polygon(c));
    topo.cells[static_cast<size_t>(c)] = build_one_cut_cell(mesh, ls, topo, c, h_T, n_sub);
  });
}

InterfaceRule interface_quadrature(std::span<const Vec2> polyline, const LevelSet& ls, int order) {
  InterfaceRule out;
  if (polyline.size() < 2) return out;
  const int n = std::max(1, (order + 2) / 2);  // Gauss count: exact to >= order on straight cuts
  std::vector<double> t, w;
  gauss_legendre(n, t, w);
  const double dt = 0.005;  // parameter step for the chord-difference Jacobian

  for (size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Vec2 a = polyline[s], b = polyline[s + 1];
    const double gtol = 1e-13 * std::max((b - a).norm(), 1e-300);
    auto curve = [&](double tau) {
      const Vec2 x = a + tau * (b - a);
      return project_to_interface(ls, x, gtol * std::max(ls.gradient(x).norm(), 1e-300));
    };
    for (int q = 0; q < n; ++q) {
      const double tau = 0.5 * (t[static_cast<size_t>(q)] + 1.0);
      const Vec2 y = curve(tau);
      const Vec2 yp = curve(tau + dt);
      const Vec2 ym = curve(tau - dt);
      const double jac = (yp - ym).norm() / (2.0 * dt);
      out.rule.points.push_back(y);
      out.rule.weights.push_back(0.5 * w[static_cast<size_t>(q)] * jac);
      out.normals.push_back(ls.unit_normal(y));
    }
  }
  return out;
}

QuadRule subcell_quadrature(std::span<const Polygon> parts, int order) {
  return parts_rule(parts, order);
}

GammaCheck check_assumption_gamma(const CutCellGeom& geom, const LevelSet& ls, double h_T) {
  // sample points on the discrete interface (nodes + refined midpoints)
  std::vector<Vec2> samples;
  const auto& poly = geom.polyline;
  for (size_t i = 0; i < poly.size(); ++i) {
    samples.push_back(poly[i]);
    if (i + 1 < poly.size()) {
      for (double tau : {0.25, 0.5, 0.75}) {
        const Vec2 x = poly[i] + tau * (poly[i + 1] - poly[i]);
        const double tol = 1e-12 * h_T * std::max(ls.gradient(x).norm(), 1e-300);
        samples.push_back(project_to_interface(ls, x, tol));
      }
    }
  }

  const Vec2 s0 = poly[poly.size() / 2];
  const Vec2 n0 = ls.unit_normal(s0);
  std::vector<Vec2> candidates = {s0 - 2.0 * h_T * n0, s0 + 2.0 * h_T * n0};
  for (int sd = 0; sd < 2; ++sd) {
    std::vector<Segment> bnd;
    for (const auto& sf : geom.subfaces[static_cast<size_t>(sd)])
      bnd.insert(bnd.end(), sf.segs.begin(), sf.segs.end());
    for (size_t i = 0; i + 1 < poly.size(); ++i) bnd.push_back({poly[i], poly[i + 1]});
    const BallEstimate ball = inscribed_ball(geom.parts[static_cast<size_t>(sd)], bnd, h_T / 64.0);
    if (ball.radius > 0.0) candidates.push_back(ball.center);
  }

  GammaCheck best;
  for (const Vec2& xh : candidates) {
    double g = std::numeric_limits<double>::infinity();
    for (const Vec2& s : samples) {
      const Vec2 d = xh - s;
      const double dist = d.norm();
      const double dtan = std::abs(d.dot(ls.unit_normal(s)));
      g = std::min(g, std::min(h_T / std::max(dist, 1e-300), dtan / h_T));
    }
    if (g > best.gamma) {
      best.gamma = g;
      best.x_hat = xh;
    }
  }
  if (!(best.gamma > 1e-12))
    throw std::runtime_error("interface not resolved in cut cell (no admissible x_hat); refine the mesh");
  return best;
}

BallCheck check_assumption_ball(const CutCellGeom& geom, double delta, double h_T) {
  BallCheck out;
  for (int sd = 0; sd < 2; ++sd) {
    std::vector<Segment> bnd;
    for (const auto& sf : geom.subfaces[static_cast<size_t>(sd)])
      bnd.insert(bnd.end(), sf.segs.begin(), sf.segs.end());
    for (size_t i = 0; i + 1 < geom.polyline.size(); ++i)
      bnd.push_back({geom.polyline[i], geom.polyline[i + 1]});
    out.balls[static_cast<size_t>(sd)] =
        inscribed_ball(geom.parts[static_cast<size_t>(sd)], bnd, h_T / 64.0);
    out.pass[static_cast<size_t>(sd)] = out.balls[static_cast<size_t>(sd)].radius >= delta * h_T;
  }
  return out;
}

ResolutionCheck check_resolution(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                 const LevelSet& ls, const CutTopology& topo) {
  ResolutionCheck rc;
  for (const auto& m : meta) rc.h = std::max(rc.h, m.h);
  rc.hM = rc.h * ls.curvature_bound;
  rc.curvature_ok = ls.curvature_bound <= 0.0 || rc.hM <= 1.0;

  std::vector<char> boundary_vertex(static_cast<size_t>(mesh.num_vertices()), 0);
  for (const auto& f : mesh.faces)
    if (f.boundary()) {
      boundary_vertex[static_cast<size_t>(f.v0)] = 1;
      boundary_vertex[static_cast<size_t>(f.v1)] = 1;
    }
  rc.boundary_clear = true;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (topo.tags[static_cast<size_t>(c)] != CellTag::Cut) continue;
    for (int v : mesh.cell_vertices[static_cast<size_t>(c)])
      if (boundary_vertex[static_cast<size_t>(v)]) {
        rc.boundary_clear = false;
        break;
      }
    if (!rc.boundary_clear) break;
  }
  rc.pass = rc.curvature_ok && rc.boundary_clear;
  return rc;
}

}  // namespace uhho
