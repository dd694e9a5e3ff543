#include "uhho/hho.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace uhho {

namespace {

Mat stiffness_matrix(const CellBasis& b, const QuadRule& q, double kappa) {
  Mat k = Mat::Zero(b.dim(), b.dim());
  for (int i = 0; i < q.size(); ++i) {
    const auto g = b.eval_grad(q.points[static_cast<size_t>(i)]);
    k.noalias() += (kappa * q.weights[static_cast<size_t>(i)]) * g * g.transpose();
  }
  return k;
}

Vec mean_vector(const CellBasis& b, const QuadRule& q) {
  Vec m = Vec::Zero(b.dim());
  for (int i = 0; i < q.size(); ++i)
    m.noalias() += q.weights[static_cast<size_t>(i)] * b.eval(q.points[static_cast<size_t>(i)]);
  return m;
}

// int_F (grad b_m . n) b_i over a face rule: rows test the gradient.
Mat normal_flux_value_matrix(const CellBasis& b, const QuadRule& q, const Vec2& n) {
  Mat m = Mat::Zero(b.dim(), b.dim());
  for (int i = 0; i < q.size(); ++i) {
    const Vec flux = b.eval_grad(q.points[static_cast<size_t>(i)]) * n;
    m.noalias() += q.weights[static_cast<size_t>(i)] * flux *
                   b.eval(q.points[static_cast<size_t>(i)]).transpose();
  }
  return m;
}

// Solves the bordered system [K m; m^T 0] [X; lam] = [B; r] for X.
Mat bordered_solve(const Mat& stiff, const Vec& mean, const Mat& rhs, const Eigen::RowVectorXd& mean_rhs,
                   const char* what) {
  const int n = static_cast<int>(stiff.rows());
  Mat sys = Mat::Zero(n + 1, n + 1);
  sys.topLeftCorner(n, n) = stiff;
  sys.topRightCorner(n, 1) = mean;
  sys.bottomLeftCorner(1, n) = mean.transpose();
  Mat full = Mat::Zero(n + 1, rhs.cols());
  full.topRows(n) = rhs;
  full.bottomRows(1) = mean_rhs;
  Eigen::PartialPivLU<Mat> lu(sys);
  const Mat sol = lu.solve(full);
  if ((sys * sol - full).norm() > 1e-8 * (1.0 + full.norm()))
    throw std::runtime_error(std::string(what) + ": singular local system beyond the constant kernel");
  return sol.topRows(n);
}

}  // namespace

CellInput gather_cell(const AggloMesh& am, const LevelSet& ls, int cell, int k,
                      std::array<double, 2> kappa) {
  CellInput in;
  in.cell = cell;
  in.cut = am.tags[static_cast<size_t>(cell)] == CellTag::Cut;
  in.h = am.meta[static_cast<size_t>(cell)].h;
  in.center = am.meta[static_cast<size_t>(cell)].x_in;
  in.kappa = kappa;
  const int qdeg = 2 * k + 4;
  const int face_pts = k + 3;

  auto outward_normal = [&](int f) {
    const auto& fc = am.base->faces[static_cast<size_t>(f)];
    const bool left = am.face_cells[static_cast<size_t>(f)][0] == cell;
    return am.base->face_outward_normal(f, left ? fc.left : fc.right);
  };

  if (!in.cut) {
    in.side = side_of(am.tags[static_cast<size_t>(cell)]);
    in.parts[static_cast<size_t>(in.side)] = am.cell_parts(cell);
    in.cellq[static_cast<size_t>(in.side)] =
        parts_rule(in.parts[static_cast<size_t>(in.side)], qdeg);
    for (int f : am.cell_faces[static_cast<size_t>(cell)]) {
      CellInput::FaceData fd;
      fd.face = f;
      fd.side = in.side;
      fd.segs = {am.base->face_segment(f)};
      fd.normal = outward_normal(f);
      fd.rule = segment_rule(fd.segs[0][0], fd.segs[0][1], face_pts);
      in.faces.push_back(std::move(fd));
    }
    return in;
  }

  const CutCellGeom& geom = *am.cut_geo[static_cast<size_t>(cell)];
  for (int sd = 0; sd < 2; ++sd) {
    in.parts[static_cast<size_t>(sd)] = geom.parts[static_cast<size_t>(sd)];
    in.cellq[static_cast<size_t>(sd)] = parts_rule(in.parts[static_cast<size_t>(sd)], qdeg);
  }
  in.ifq = interface_quadrature(geom.polyline, ls, qdeg);
  for (int sd = 0; sd < 2; ++sd) {
    for (const SubFace& sf : geom.subfaces[static_cast<size_t>(sd)]) {
      CellInput::FaceData fd;
      fd.face = sf.face;
      fd.side = sd;
      fd.segs = sf.segs;
      fd.normal = outward_normal(sf.face);
      for (const auto& sg : sf.segs) fd.rule.append(segment_rule(sg[0], sg[1], face_pts));
      in.faces.push_back(std::move(fd));
    }
  }
  return in;
}

double calibrate_eta(const CellBasis& cb1, const InterfaceRule& ifq, double h, int k) {
  const int nk = poly_space_dim(k);
  Mat tr = Mat::Zero(nk, nk);
  for (int q = 0; q < ifq.rule.size(); ++q) {
    const Vec v = cb1.eval(ifq.rule.points[static_cast<size_t>(q)]).head(nk);
    tr.noalias() += ifq.rule.weights[static_cast<size_t>(q)] * v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(tr, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("calibrate_eta: eigenvalue solve failed");
  // c_dtr^2 = h * lambda_max of the trace Gram against the (identity) volume
  // Gram of [P^k(T^1)]^2 fields; 10% headroom on the 4 c_dtr^2 bound
  return 4.0 * 1.1 * h * std::max(es.eigenvalues().maxCoeff(), 0.0);
}

Mat nitsche_matrix(const CellInput& in, const CellBasis& cb1, const CellBasis& cb2, double eta,
                   Mat* semi_out) {
  const int n1 = cb1.dim(), n2 = cb2.dim();
  Mat n = Mat::Zero(n1 + n2, n1 + n2);
  n.topLeftCorner(n1, n1) = stiffness_matrix(cb1, in.cellq[0], in.kappa[0]);
  n.bottomRightCorner(n2, n2) = stiffness_matrix(cb2, in.cellq[1], in.kappa[1]);

  Mat flux = Mat::Zero(n1 + n2, n1 + n2);  // F(V,W) = int (kappa grad v)^1.n [W]
  Mat pen = Mat::Zero(n1 + n2, n1 + n2);
  const double pw = eta * in.kappa[0] / in.h;
  for (int q = 0; q < in.ifq.rule.size(); ++q) {
    const double w = in.ifq.rule.weights[static_cast<size_t>(q)];
    const Vec2& x = in.ifq.rule.points[static_cast<size_t>(q)];
    const Vec2& nrm = in.ifq.normals[static_cast<size_t>(q)];
    const Vec v1 = cb1.eval(x);
    const Vec v2 = cb2.eval(x);
    const Vec f1 = in.kappa[0] * (cb1.eval_grad(x) * nrm);
    flux.topLeftCorner(n1, n1).noalias() += w * v1 * f1.transpose();
    flux.bottomLeftCorner(n2, n1).noalias() -= w * v2 * f1.transpose();
    pen.topLeftCorner(n1, n1).noalias() += (pw * w) * v1 * v1.transpose();
    pen.topRightCorner(n1, n2).noalias() -= (pw * w) * v1 * v2.transpose();
    pen.bottomRightCorner(n2, n2).noalias() += (pw * w) * v2 * v2.transpose();
  }
  pen.bottomLeftCorner(n2, n1) = pen.topRightCorner(n1, n2).transpose();
  if (semi_out) *semi_out = n + pen;
  n -= flux + flux.transpose();
  n += pen;
  return n;
}

Mat reconstruction_uncut(const CellInput& in, const CellBasis& cb, const std::vector<FaceBasis>& fb,
                         const LocalDofLayout& layout, const Mat& stiff) {
  const int nc = cb.dim();
  Mat b = Mat::Zero(nc, layout.nloc());
  b.leftCols(nc) = stiff;
  const double kap = in.kappa[static_cast<size_t>(in.side)];
  for (size_t i = 0; i < in.faces.size(); ++i) {
    const auto& fd = in.faces[i];
    b.leftCols(nc).noalias() -= kap * normal_flux_value_matrix(cb, fd.rule, fd.normal);
    b.middleCols(layout.face_offset(static_cast<int>(i)), layout.nfb).noalias() +=
        kap * trace_normal_flux_matrix(cb, fb[i], fd.rule, fd.normal);
  }
  const Vec mean = mean_vector(cb, in.cellq[static_cast<size_t>(in.side)]);
  Eigen::RowVectorXd mean_rhs = Eigen::RowVectorXd::Zero(layout.nloc());
  mean_rhs.head(nc) = mean.transpose();
  return bordered_solve(stiff, mean, b, mean_rhs, "reconstruct_uncut");
}

Mat reconstruction_cut(const CellInput& in, const std::array<CellBasis, 2>& cb,
                       const std::vector<FaceBasis>& fb, const LocalDofLayout& layout,
                       const Mat& nitsche) {
  const int nc = layout.ncell;
  Mat b = Mat::Zero(2 * nc, layout.nloc());
  b.leftCols(2 * nc) = nitsche;
  for (size_t i = 0; i < in.faces.size(); ++i) {
    const auto& fd = in.faces[i];
    const int sd = fd.side;
    const double kap = in.kappa[static_cast<size_t>(sd)];
    b.block(sd * nc, sd * nc, nc, nc).noalias() -=
        kap * normal_flux_value_matrix(cb[static_cast<size_t>(sd)], fd.rule, fd.normal);
    b.block(sd * nc, layout.face_offset(static_cast<int>(i)), nc, layout.nfb).noalias() +=
        kap * trace_normal_flux_matrix(cb[static_cast<size_t>(sd)], fb[i], fd.rule, fd.normal);
  }
  Vec mean(2 * nc);
  mean.head(nc) = mean_vector(cb[0], in.cellq[0]);
  mean.tail(nc) = mean_vector(cb[1], in.cellq[1]);
  Eigen::RowVectorXd mean_rhs = Eigen::RowVectorXd::Zero(layout.nloc());
  mean_rhs.head(2 * nc) = mean.transpose();
  return bordered_solve(nitsche, mean, b, mean_rhs, "reconstruct_cut");
}

Mat stabilization(const CellInput& in, const std::array<CellBasis, 2>& cb,
                  const std::vector<FaceBasis>& fb, const LocalDofLayout& layout) {
  Mat s = Mat::Zero(layout.nloc(), layout.nloc());
  for (size_t i = 0; i < in.faces.size(); ++i) {
    const auto& fd = in.faces[i];
    const int sd = layout.cut ? fd.side : in.side;
    const double w = in.kappa[static_cast<size_t>(sd)] / in.h;
    // rows of the projected gap Pi_F(v_T) - v_F, in the orthonormal face basis
    Mat d = Mat::Zero(layout.nfb, layout.nloc());
    d.middleCols(layout.cell_offset(layout.cut ? sd : 0), layout.ncell) =
        trace_value_matrix(cb[static_cast<size_t>(layout.cut ? sd : 0)], fb[i], fd.rule);
    d.middleCols(layout.face_offset(static_cast<int>(i)), layout.nfb) =
        -Mat::Identity(layout.nfb, layout.nfb);
    s.noalias() += w * d.transpose() * d;
  }
  return s;
}

Mat LocalOps::seminorm_matrix() const {
  Mat m = stab;
  const int n = layout.cell_dofs();
  m.topLeftCorner(n, n) += layout.cut ? nt_semi : stiff;
  return m;
}

LocalOps build_local_ops(const CellInput& in, int k, double eta_override, const ProblemData* data) {
  LocalOps ops;
  ops.layout.k = k;
  ops.layout.cut = in.cut;
  ops.layout.ncell = poly_space_dim(k + 1);
  ops.layout.nfb = k + 1;
  for (const auto& fd : in.faces) ops.layout.face_blocks.push_back({fd.face, fd.side});

  if (!in.cut) {
    const int sd = in.side;
    ops.cb[0] = make_cell_basis(k + 1, in.center, in.h, in.cellq[static_cast<size_t>(sd)]);
    for (const auto& fd : in.faces) ops.fb.emplace_back(k, fd.segs);
    ops.stiff = stiffness_matrix(ops.cb[0], in.cellq[static_cast<size_t>(sd)],
                                 in.kappa[static_cast<size_t>(sd)]);
    ops.recon = reconstruction_uncut(in, ops.cb[0], ops.fb, ops.layout, ops.stiff);
    ops.stab = stabilization(in, ops.cb, ops.fb, ops.layout);
    ops.A = ops.recon.transpose() * ops.stiff * ops.recon + ops.stab;
    ops.rhs = Vec::Zero(ops.layout.nloc());
    if (data && data->f) {
      for (int q = 0; q < in.cellq[static_cast<size_t>(sd)].size(); ++q) {
        const Vec2& x = in.cellq[static_cast<size_t>(sd)].points[static_cast<size_t>(q)];
        ops.rhs.head(ops.layout.ncell).noalias() +=
            in.cellq[static_cast<size_t>(sd)].weights[static_cast<size_t>(q)] * data->f(x, sd) *
            ops.cb[0].eval(x);
      }
    }
    condense(ops);
    return ops;
  }

  ops.cb[0] = make_cell_basis(k + 1, in.center, in.h, in.cellq[0]);
  ops.cb[1] = make_cell_basis(k + 1, in.center, in.h, in.cellq[1]);
  for (const auto& fd : in.faces) ops.fb.emplace_back(k, fd.segs);

  ops.eta = eta_override > 0.0 ? eta_override : calibrate_eta(ops.cb[0], in.ifq, in.h, k);
  ops.stiff = nitsche_matrix(in, ops.cb[0], ops.cb[1], ops.eta, &ops.nt_semi);

  {  // assembly-time coercivity spot check: n_T(V,V) >= 1/2 |V|_{n_T}^2
    Eigen::SelfAdjointEigenSolver<Mat> es(ops.stiff - 0.5 * ops.nt_semi, Eigen::EigenvaluesOnly);
    const double scale = ops.nt_semi.norm() + 1e-300;
    if (es.eigenvalues().minCoeff() < -1e-12 * scale)
      throw std::runtime_error("nitsche_form: coercivity check failed on cell " +
                               std::to_string(in.cell) + "; increase eta");
  }

  ops.recon = reconstruction_cut(in, ops.cb, ops.fb, ops.layout, ops.stiff);
  ops.stab = stabilization(in, ops.cb, ops.fb, ops.layout);
  ops.A = ops.recon.transpose() * ops.stiff * ops.recon + ops.stab;
  ops.rhs = Vec::Zero(ops.layout.nloc());
  if (data) {
    const int nc = ops.layout.ncell;
    if (data->f) {
      for (int sd = 0; sd < 2; ++sd) {
        for (int q = 0; q < in.cellq[static_cast<size_t>(sd)].size(); ++q) {
          const Vec2& x = in.cellq[static_cast<size_t>(sd)].points[static_cast<size_t>(q)];
          ops.rhs.segment(sd * nc, nc).noalias() +=
              in.cellq[static_cast<size_t>(sd)].weights[static_cast<size_t>(q)] * data->f(x, sd) *
              ops.cb[static_cast<size_t>(sd)].eval(x);
        }
      }
    }
    const double pw = ops.eta * in.kappa[0] / in.h;
    for (int q = 0; q < in.ifq.rule.size(); ++q) {
      const double w = in.ifq.rule.weights[static_cast<size_t>(q)];
      const Vec2& x = in.ifq.rule.points[static_cast<size_t>(q)];
      const Vec2& nrm = in.ifq.normals[static_cast<size_t>(q)];
      if (data->g_neumann_jump) {
        const double gn = data->g_neumann_jump(x);
        ops.rhs.segment(nc, nc).noalias() += (w * gn) * ops.cb[1].eval(x);
      }
      if (data->g_dirichlet_jump) {
        // g_D tested against phi_T(W) = -kappa^1 grad w_1 . n + eta kappa^1 h^{-1} [W]
        const double gd = data->g_dirichlet_jump(x);
        ops.rhs.head(nc).noalias() -= (w * gd * in.kappa[0]) * (ops.cb[0].eval_grad(x) * nrm);
        ops.rhs.head(nc).noalias() += (w * gd * pw) * ops.cb[0].eval(x);
        ops.rhs.segment(nc, nc).noalias() -= (w * gd * pw) * ops.cb[1].eval(x);
      }
    }
  }
  condense(ops);
  return ops;
}

void condense(LocalOps& ops) {
  const int n = ops.layout.nloc();
  const int nc = ops.layout.cell_dofs();
  const int nf = n - nc;
  const Mat acc = ops.A.topLeftCorner(nc, nc);
  const Mat acf = ops.A.topRightCorner(nc, nf);
  Eigen::LDLT<Mat> ldlt(acc);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("condense: cell-block factorization failed on cell layout of size " +
                             std::to_string(nc));
  ops.recov_K = ldlt.solve(acf);
  ops.recov_r = ldlt.solve(ops.rhs.head(nc));
  ops.scond = ops.A.bottomRightCorner(nf, nf) - acf.transpose() * ops.recov_K;
  ops.rcond = ops.rhs.tail(nf) - acf.transpose() * ops.recov_r;
}

}  // namespace uhho
