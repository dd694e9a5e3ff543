#include "uhho/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace uhho {

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void write_matrix_market(std::ostream& os, const SpMat& a) {
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  long nnz_lower = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.row() >= it.col()) ++nnz_lower;
  os << a.rows() << " " << a.cols() << " " << nnz_lower << "\n";
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.row() >= it.col())
        os << it.row() + 1 << " " << it.col() + 1 << " " << format_sci(it.value()) << "\n";
}

void write_matrix_market_file(const std::string& path, const SpMat& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_matrix_market(os, a);
}

void write_solution_vtk(std::ostream& os, const Workspace& ws, const SolveOutput& out) {
  std::vector<Vec2> points;
  std::vector<std::array<long, 3>> tris;
  std::vector<double> values;

  auto emit = [&](const std::vector<Polygon>& parts, const CellBasis& cb, const Vec& coeffs) {
    for (const Polygon& p : parts) {
      for (const auto& t : triangulate(p)) {
        const long base = static_cast<long>(points.size());
        for (const Vec2& x : t) {
          points.push_back(x);
          values.push_back(cb.eval(x).dot(coeffs));
        }
        tris.push_back({base, base + 1, base + 2});
      }
    }
  };

  const AggloMesh& am = ws.amesh;
  for (int c = 0; c < am.num_cells(); ++c) {
    const LocalOps& ops = out.locals[static_cast<size_t>(c)];
    const Vec& uc = out.sol.cell_dofs[static_cast<size_t>(c)];
    const int nc = ops.layout.ncell;
    if (am.tags[static_cast<size_t>(c)] != CellTag::Cut) {
      emit(am.cell_parts(c), ops.cb[0], uc);
    } else {
      const CutCellGeom& geom = *am.cut_geo[static_cast<size_t>(c)];
      emit(geom.parts[0], ops.cb[0], uc.head(nc));
      emit(geom.parts[1], ops.cb[1], uc.tail(nc));
    }
  }

  os << "# vtk DataFile Version 3.0\nuhho solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << points.size() << " double\n";
  for (const Vec2& p : points) os << format_sci(p.x()) << " " << format_sci(p.y()) << " 0\n";
  os << "CELLS " << tris.size() << " " << 4 * tris.size() << "\n";
  for (const auto& t : tris) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "CELL_TYPES " << tris.size() << "\n";
  for (size_t i = 0; i < tris.size(); ++i) os << "5\n";
  os << "POINT_DATA " << points.size() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double v : values) os << format_sci(v) << "\n";
}

void write_solution_vtk_file(const std::string& path, const Workspace& ws, const SolveOutput& out) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_solution_vtk(os, ws, out);
}

void write_error_csv(std::ostream& os, std::span<const StudyRow> rows) {
  os << "n,h,dofs,grad1_sq,grad2_sq,jump_sq,flux_sq,energy,eoc,jump_eoc\n";
  for (const auto& r : rows) {
    os << r.n << "," << format_sci(r.h) << "," << r.dofs << "," << format_sci(r.err.grad_sq[0])
       << "," << format_sci(r.err.grad_sq[1]) << "," << format_sci(r.err.jump_sq) << ","
       << format_sci(r.err.flux_sq) << "," << format_sci(r.err.energy()) << ",";
    os << (std::isnan(r.eoc) ? std::string("n/a") : format_sci(r.eoc)) << ",";
    os << (std::isnan(r.jump_eoc) ? std::string("n/a") : format_sci(r.jump_eoc)) << "\n";
  }
}

void write_error_csv_file(const std::string& path, std::span<const StudyRow> rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_error_csv(os, rows);
}

void write_agglomerate_csv(std::ostream& os, const Workspace& ws) {
  os << "cell,seed,tag,class,members\n";
  const AggloMesh& am = ws.amesh;
  for (int c = 0; c < am.num_cells(); ++c) {
    const int seed = am.seed[static_cast<size_t>(c)];
    const char* tag = am.tags[static_cast<size_t>(c)] == CellTag::Cut
                          ? "cut"
                          : (am.tags[static_cast<size_t>(c)] == CellTag::Inside1 ? "inside1"
                                                                                 : "inside2");
    std::string klass = "-";
    if (seed >= 0 && seed < static_cast<int>(ws.part.class_of.size())) {
      const int kc = ws.part.class_of[static_cast<size_t>(seed)];
      if (kc == 0) klass = "ok";
      else if (kc == 1) klass = "ko1";
      else if (kc == 2) klass = "ko2";
    }
    os << c << "," << seed << "," << tag << "," << klass << ",";
    const auto& mem = am.members[static_cast<size_t>(c)];
    for (size_t i = 0; i < mem.size(); ++i) os << (i ? " " : "") << mem[i];
    os << "\n";
  }
}

}  // namespace uhho
