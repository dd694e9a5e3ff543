#include "uhho/agglomeration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uhho {

CutPartition partition_cut_cells(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                 const CutTopology& topo, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("partition_cut_cells: delta must lie in (0,1)");
  CutPartition part;
  part.delta = delta;
  part.class_of.assign(static_cast<size_t>(mesh.num_cells()), -1);
  part.balls.assign(static_cast<size_t>(mesh.num_cells()), {});
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (topo.tags[static_cast<size_t>(c)] != CellTag::Cut) continue;
    const BallCheck bc =
        check_assumption_ball(*topo.cells[static_cast<size_t>(c)], delta, meta[static_cast<size_t>(c)].h);
    part.balls[static_cast<size_t>(c)] = bc.balls;
    if (bc.pass[0] && bc.pass[1]) {
      part.class_of[static_cast<size_t>(c)] = 0;
      part.ok.push_back(c);
    } else if (!bc.pass[0] && bc.pass[1]) {
      part.class_of[static_cast<size_t>(c)] = 1;
      part.ko1.push_back(c);
    } else if (bc.pass[0] && !bc.pass[1]) {
      part.class_of[static_cast<size_t>(c)] = 2;
      part.ko2.push_back(c);
    } else {
      std::ostringstream os;
      os << "partition_cut_cells: both sub-cells of cell " << c
         << " fail the ball condition at delta=" << delta << "; the mesh is too coarse, refine";
      throw std::runtime_error(os.str());
    }
  }
  return part;
}

namespace {

bool shares_face(const PolyMesh& mesh, int a, int b) {
  for (int f : mesh.cell_faces[static_cast<size_t>(a)]) {
    const auto& fc = mesh.faces[static_cast<size_t>(f)];
    if (fc.left == b || fc.right == b) return true;
  }
  return false;
}

double side_radius(const std::vector<CellMeta>& meta, const CutTopology& topo,
                   const CutPartition& part, int c, int side) {
  if (topo.tags[static_cast<size_t>(c)] == CellTag::Cut)
    return part.balls[static_cast<size_t>(c)][static_cast<size_t>(side)].radius;
  return meta[static_cast<size_t>(c)].r_in;  // uncut candidate fully on this side
}

}  // namespace

NeighborSelection select_neighbors(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                   const CutTopology& topo, const CutPartition& part) {
  NeighborSelection sel;
  std::set<int> hat;

  auto pick = [&](int T, int side, bool step2) -> int {
    int best = -1;
    std::array<double, 3> best_key = {-1.0, -1.0, 0.0};
    for (int nb : meta[static_cast<size_t>(T)].delta) {
      if (nb == T) continue;
      const CellTag tag = topo.tags[static_cast<size_t>(nb)];
      const int klass = part.class_of[static_cast<size_t>(nb)];
      // candidate classes: T_h^i, OK, and KO of the opposite side
      bool admissible;
      if (tag != CellTag::Cut)
        admissible = side_of(tag) == side;
      else
        admissible = klass == 0 || klass == (side == 0 ? 2 : 1);
      if (!admissible) continue;
      // in step (2), avoid companions that merge themselves (KO1) when any
      // terminal candidate exists, so agglomerates stay one level deep
      const double tier = (step2 && klass == 1) ? 0.0 : 1.0;
      const double face_tier = shares_face(mesh, T, nb) ? 1.0 : 0.0;
      const double radius = side_radius(meta, topo, part, nb, side);
      const std::array<double, 3> key = {tier, face_tier, radius};
      if (best < 0 || key > best_key || (key == best_key && nb < best)) {
        best = nb;
        best_key = key;
      }
    }
    return best;
  };

  for (int T : part.ko1) {
    const int nb = pick(T, 0, false);
    if (nb < 0) {
      std::ostringstream os;
      os << "select_neighbors: no suitable companion for KO,1 cell " << T
         << " (h=" << meta[static_cast<size_t>(T)].h << ", delta=" << part.delta << "); refine the mesh";
      throw std::runtime_error(os.str());
    }
    sel.merges.emplace_back(T, nb);
    if (part.class_of[static_cast<size_t>(nb)] == 2) hat.insert(nb);
  }
  for (int T : part.ko2) {
    if (hat.count(T)) continue;
    const int nb = pick(T, 1, true);
    if (nb < 0) {
      std::ostringstream os;
      os << "select_neighbors: no suitable companion for KO,2 cell " << T
         << " (h=" << meta[static_cast<size_t>(T)].h << ", delta=" << part.delta << "); refine the mesh";
      throw std::runtime_error(os.str());
    }
    sel.merges.emplace_back(T, nb);
  }
  sel.hat_ko2.assign(hat.begin(), hat.end());
  return sel;
}

std::vector<Polygon> AggloMesh::cell_parts(int c) const {
  std::vector<Polygon> parts;
  for (int m : members[static_cast<size_t>(c)]) parts.push_back(base->cell_polygon(m));
  return parts;
}

namespace {

int uf_find(std::vector<int>& up, int x) {
  while (up[static_cast<size_t>(x)] != x) {
    up[static_cast<size_t>(x)] = up[static_cast<size_t>(up[static_cast<size_t>(x)])];
    x = up[static_cast<size_t>(x)];
  }
  return x;
}

// Joins the per-member interface chains into a single polyline; endpoints are
// matched within a tolerance. Throws when the union is disconnected.
std::vector<Vec2> join_polylines(std::vector<std::vector<Vec2>> chains, double tol) {
  if (chains.empty()) return {};
  std::vector<Vec2> cur = std::move(chains.back());
  chains.pop_back();
  bool progress = true;
  while (!chains.empty() && progress) {
    progress = false;
    for (size_t i = 0; i < chains.size(); ++i) {
      auto& ch = chains[i];
      if ((cur.back() - ch.front()).norm() < tol) {
        cur.insert(cur.end(), ch.begin() + 1, ch.end());
      } else if ((cur.back() - ch.back()).norm() < tol) {
        cur.insert(cur.end(), ch.rbegin() + 1, ch.rend());
      } else if ((cur.front() - ch.back()).norm() < tol) {
        cur.insert(cur.begin(), ch.begin(), ch.end() - 1);
      } else if ((cur.front() - ch.front()).norm() < tol) {
        cur.insert(cur.begin(), ch.rbegin(), ch.rend() - 1);
      } else {
        continue;
      }
      chains.erase(chains.begin() + static_cast<long>(i));
      progress = true;
      break;
    }
  }
  if (!chains.empty())
    throw std::runtime_error("agglomerate: disconnected interface inside an agglomerated cell");
  return cur;
}

std::vector<Segment> face_side_segments(const PolyMesh& mesh, const FaceCutInfo& info, int f,
                                        int side) {
  std::vector<Segment> segs;
  const Segment s = mesh.face_segment(f);
  for (const auto& iv : info.intervals[static_cast<size_t>(side)])
    segs.push_back({s[0] + iv[0] * (s[1] - s[0]), s[0] + iv[1] * (s[1] - s[0])});
  return segs;
}

}  // namespace

AggloMesh trivial_agglomeration(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                                const CutTopology& topo) {
  AggloMesh am;
  am.base = &mesh;
  am.n_sub = topo.n_sub;
  am.face_cuts = topo.face_cuts;
  am.tags = topo.tags;
  am.cut_geo = topo.cells;
  am.meta = meta;
  am.members.resize(static_cast<size_t>(mesh.num_cells()));
  am.seed.resize(static_cast<size_t>(mesh.num_cells()));
  am.parent_to_cell.resize(static_cast<size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    am.members[static_cast<size_t>(c)] = {c};
    am.seed[static_cast<size_t>(c)] = c;
    am.parent_to_cell[static_cast<size_t>(c)] = c;
  }
  am.face_alive.assign(static_cast<size_t>(mesh.num_faces()), 1);
  am.cell_faces = mesh.cell_faces;
  am.face_cells.resize(static_cast<size_t>(mesh.num_faces()));
  for (int f = 0; f < mesh.num_faces(); ++f)
    am.face_cells[static_cast<size_t>(f)] = {mesh.faces[static_cast<size_t>(f)].left,
                                             mesh.faces[static_cast<size_t>(f)].right};
  return am;
}

AggloMesh agglomerate(const PolyMesh& mesh, const std::vector<CellMeta>& meta,
                      const CutTopology& topo, const CutPartition& part,
                      const NeighborSelection& sel, double delta_star) {
  (void)meta;
  (void)part;
  const int nc = mesh.num_cells();
  std::vector<int> up(static_cast<size_t>(nc));
  std::iota(up.begin(), up.end(), 0);
  for (const auto& [ko, target] : sel.merges)
    up[static_cast<size_t>(uf_find(up, ko))] = uf_find(up, target);

  // Merge chains always terminate in a cell that does not merge itself; that
  // terminal cell is the designated seed of its component.
  std::vector<char> merges_out(static_cast<size_t>(nc), 0);
  for (const auto& [ko, target] : sel.merges) {
    (void)target;
    merges_out[static_cast<size_t>(ko)] = 1;
  }

  AggloMesh am;
  am.base = &mesh;
  am.n_sub = topo.n_sub;
  am.face_cuts = topo.face_cuts;

  std::map<int, int> root_to_cell;
  am.parent_to_cell.assign(static_cast<size_t>(nc), -1);
  for (int c = 0; c < nc; ++c) {
    const int r = uf_find(up, c);
    auto it = root_to_cell.find(r);
    if (it == root_to_cell.end()) {
      it = root_to_cell.emplace(r, static_cast<int>(am.members.size())).first;
      am.members.emplace_back();
      am.seed.push_back(-1);
    }
    am.parent_to_cell[static_cast<size_t>(c)] = it->second;
    am.members[static_cast<size_t>(it->second)].push_back(c);
    if (!merges_out[static_cast<size_t>(c)]) am.seed[static_cast<size_t>(it->second)] = c;
  }
  for (auto& m : am.members) std::sort(m.begin(), m.end());

  const int nac = am.num_cells();
  am.face_alive.assign(static_cast<size_t>(mesh.num_faces()), 1);
  am.face_cells.assign(static_cast<size_t>(mesh.num_faces()), {-1, -1});
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& fc = mesh.faces[static_cast<size_t>(f)];
    const int l = am.parent_to_cell[static_cast<size_t>(fc.left)];
    const int r = fc.boundary() ? -1 : am.parent_to_cell[static_cast<size_t>(fc.right)];
    if (l == r) {
      am.face_alive[static_cast<size_t>(f)] = 0;  // interior to an agglomerate
      continue;
    }
    am.face_cells[static_cast<size_t>(f)] = {l, r};
  }

  am.cell_faces.resize(static_cast<size_t>(nac));
  for (int c = 0; c < nac; ++c) {
    std::set<int> seen;
    for (int m : am.members[static_cast<size_t>(c)])
      for (int f : mesh.cell_faces[static_cast<size_t>(m)])
        if (am.face_alive[static_cast<size_t>(f)] && seen.insert(f).second)
          am.cell_faces[static_cast<size_t>(c)].push_back(f);
  }

  // tags and merged cut geometry
  am.tags.assign(static_cast<size_t>(nac), CellTag::Inside1);
  am.cut_geo.assign(static_cast<size_t>(nac), std::nullopt);
  am.meta.resize(static_cast<size_t>(nac));
  for (int c = 0; c < nac; ++c) {
    const auto& mem = am.members[static_cast<size_t>(c)];
    bool any_cut = false;
    for (int m : mem) any_cut = any_cut || topo.tags[static_cast<size_t>(m)] == CellTag::Cut;

    // metadata of the union
    std::vector<Polygon> parts = am.cell_parts(c);
    Polygon all;
    for (const auto& p : parts) all.pts.insert(all.pts.end(), p.pts.begin(), p.pts.end());
    CellMeta& mt = am.meta[static_cast<size_t>(c)];
    mt.h = polygon_diameter(all);
    std::vector<Segment> bnd;
    for (int f : am.cell_faces[static_cast<size_t>(c)]) bnd.push_back(mesh.face_segment(f));
    const BallEstimate ball = inscribed_ball(parts, bnd, mt.h / 64.0);
    mt.x_in = ball.center;
    mt.r_in = ball.radius;

    if (!any_cut) {
      am.tags[static_cast<size_t>(c)] = topo.tags[static_cast<size_t>(mem.front())];
      continue;
    }
    am.tags[static_cast<size_t>(c)] = CellTag::Cut;

    if (mem.size() == 1) {
      am.cut_geo[static_cast<size_t>(c)] = *topo.cells[static_cast<size_t>(mem.front())];
      continue;
    }

    CutCellGeom geom;
    std::vector<std::vector<Vec2>> chains;
    for (int m : mem) {
      const CellTag t = topo.tags[static_cast<size_t>(m)];
      if (t == CellTag::Cut) {
        const CutCellGeom& g = *topo.cells[static_cast<size_t>(m)];
        for (int sd = 0; sd < 2; ++sd)
          for (const auto& p : g.parts[static_cast<size_t>(sd)])
            geom.parts[static_cast<size_t>(sd)].push_back(p);
        chains.push_back(g.polyline);
      } else {
        geom.parts[static_cast<size_t>(side_of(t))].push_back(mesh.cell_polygon(m));
      }
    }
    geom.polyline = join_polylines(std::move(chains), 1e-9 * mt.h);
    for (int sd = 0; sd < 2; ++sd) {
      for (int f : am.cell_faces[static_cast<size_t>(c)]) {
        auto segs = face_side_segments(mesh, am.face_cuts[static_cast<size_t>(f)], f, sd);
        if (segs.empty()) continue;
        SubFace sf;
        sf.face = f;
        sf.segs = std::move(segs);
        for (const auto& sg : sf.segs) sf.measure += segment_length(sg);
        geom.subfaces[static_cast<size_t>(sd)].push_back(std::move(sf));
      }
      for (const auto& p : geom.parts[static_cast<size_t>(sd)])
        geom.area[static_cast<size_t>(sd)] += polygon_area(p);
    }
    am.cut_geo[static_cast<size_t>(c)] = std::move(geom);
  }

  if (delta_star > 0.0) {
    for (int c = 0; c < nac; ++c) {
      if (am.tags[static_cast<size_t>(c)] != CellTag::Cut) continue;
      const BallCheck bc = check_assumption_ball(*am.cut_geo[static_cast<size_t>(c)], delta_star,
                                                 am.meta[static_cast<size_t>(c)].h);
      if (!bc.pass[0] || !bc.pass[1]) {
        std::ostringstream os;
        os << "agglomerate: cell " << c << " still fails the ball condition at delta*=" << delta_star
           << "; refine the mesh and retry";
        throw std::runtime_error(os.str());
      }
    }
  }
  return am;
}

}  // namespace uhho
