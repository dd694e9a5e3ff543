#include "uhho/basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace uhho {

namespace {

// graded monomial exponents: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<std::array<int, 2>> exponents(int degree) {
  std::vector<std::array<int, 2>> e;
  e.reserve(static_cast<size_t>(poly_space_dim(degree)));
  for (int d = 0; d <= degree; ++d)
    for (int i = d; i >= 0; --i) e.push_back({i, d - i});
  return e;
}

Vec monomials_1d(double t, int degree) {
  Vec m(degree + 1);
  m[0] = 1.0;
  for (int j = 1; j <= degree; ++j) m[j] = m[j - 1] * t;
  return m;
}

}  // namespace

CellBasis::CellBasis(int degree, const Vec2& center, double h)
    : degree_(degree), center_(center), h_(h), coeff_(Mat::Identity(dim(), dim())) {
  if (degree < 0 || h <= 0.0) throw std::invalid_argument("CellBasis: bad degree or scale");
}

Vec CellBasis::eval(const Vec2& x) const {
  const auto exps = exponents(degree_);
  const Vec2 xi = (x - center_) / h_;
  const Vec px = monomials_1d(xi.x(), degree_);
  const Vec py = monomials_1d(xi.y(), degree_);
  Vec m(dim());
  for (int i = 0; i < dim(); ++i)
    m[i] = px[exps[static_cast<size_t>(i)][0]] * py[exps[static_cast<size_t>(i)][1]];
  return coeff_ * m;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> CellBasis::eval_grad(const Vec2& x) const {
  const auto exps = exponents(degree_);
  const Vec2 xi = (x - center_) / h_;
  const Vec px = monomials_1d(xi.x(), degree_);
  const Vec py = monomials_1d(xi.y(), degree_);
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(dim(), 2);
  for (int i = 0; i < dim(); ++i) {
    const int a = exps[static_cast<size_t>(i)][0];
    const int b = exps[static_cast<size_t>(i)][1];
    g(i, 0) = a > 0 ? a * px[a - 1] * py[b] / h_ : 0.0;
    g(i, 1) = b > 0 ? b * px[a] * py[b - 1] / h_ : 0.0;
  }
  return coeff_ * g;
}

void CellBasis::orthonormalize(const QuadRule& rule) {
  const int n = dim();
  coeff_ = Mat::Identity(n, n);
  Mat gram = Mat::Zero(n, n);
  for (int q = 0; q < rule.size(); ++q) {
    const Vec m = eval(rule.points[static_cast<size_t>(q)]);
    gram.noalias() += rule.weights[static_cast<size_t>(q)] * m * m.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  gram_cond_ = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmin > 0.0) || gram_cond_ > 1e14)
    throw std::runtime_error(
        "CellBasis: sub-domain mass matrix numerically singular; the delta-ball condition on this "
        "sub-cell appears violated");
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("CellBasis: Cholesky factorization of the Gram matrix failed");
  // b_new = L^{-1} b: unit Gram, degree flag preserved (L is lower triangular)
  coeff_ = llt.matrixL().solve(Mat::Identity(n, n));
}

CellBasis make_cell_basis(int degree, const Vec2& center, double h, const QuadRule& mass_rule) {
  CellBasis b(degree, center, h);
  b.orthonormalize(mass_rule);
  return b;
}

FaceBasis::FaceBasis(int degree, std::span<const Segment> segs)
    : degree_(degree), segs_(segs.begin(), segs.end()) {
  if (degree < 0 || segs.empty()) throw std::invalid_argument("FaceBasis: bad degree or segments");
  // covering interval along the carrier line of the first segment
  dir_ = (segs_[0][1] - segs_[0][0]).normalized();
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (const auto& s : segs_) {
    for (const auto& p : s) {
      const double t = dir_.dot(p - segs_[0][0]);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    measure_ += segment_length(s);
  }
  origin_ = segs_[0][0] + 0.5 * (tmin + tmax) * dir_;
  half_ = 0.5 * (tmax - tmin);
  if (!(half_ > 0.0)) throw std::invalid_argument("FaceBasis: zero-length sub-face");

  const int n = dim();
  coeff_ = Mat::Identity(n, n);
  Mat gram = Mat::Zero(n, n);
  const QuadRule q = quadrature(degree_ + 1);
  for (int i = 0; i < q.size(); ++i) {
    const Vec m = eval(q.points[static_cast<size_t>(i)]);
    gram.noalias() += q.weights[static_cast<size_t>(i)] * m * m.transpose();
  }
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("FaceBasis: Gram factorization failed (degenerate sub-face)");
  coeff_ = llt.matrixL().solve(Mat::Identity(n, n));
}

Vec FaceBasis::eval(const Vec2& x) const {
  const double t = dir_.dot(x - origin_) / half_;
  return coeff_ * monomials_1d(t, degree_);
}

QuadRule FaceBasis::quadrature(int npoints) const {
  QuadRule q;
  for (const auto& s : segs_) q.append(segment_rule(s[0], s[1], npoints));
  return q;
}

Vec project_cell(const std::function<double(const Vec2&)>& f, const CellBasis& basis,
                 const QuadRule& rule) {
  Vec c = Vec::Zero(basis.dim());
  for (int q = 0; q < rule.size(); ++q)
    c.noalias() += rule.weights[static_cast<size_t>(q)] *
                   f(rule.points[static_cast<size_t>(q)]) * basis.eval(rule.points[static_cast<size_t>(q)]);
  return c;  // orthonormal basis: L2 coefficients are plain moments
}

Vec project_face(const std::function<double(const Vec2&)>& f, const FaceBasis& basis,
                 int quad_points) {
  const QuadRule rule = basis.quadrature(quad_points > 0 ? quad_points : basis.degree() + 4);
  Vec c = Vec::Zero(basis.dim());
  for (int q = 0; q < rule.size(); ++q)
    c.noalias() += rule.weights[static_cast<size_t>(q)] *
                   f(rule.points[static_cast<size_t>(q)]) * basis.eval(rule.points[static_cast<size_t>(q)]);
  return c;
}

Mat trace_value_matrix(const CellBasis& cb, const FaceBasis& fb, const QuadRule& face_rule) {
  Mat m = Mat::Zero(fb.dim(), cb.dim());
  for (int q = 0; q < face_rule.size(); ++q)
    m.noalias() += face_rule.weights[static_cast<size_t>(q)] *
                   fb.eval(face_rule.points[static_cast<size_t>(q)]) *
                   cb.eval(face_rule.points[static_cast<size_t>(q)]).transpose();
  return m;
}

Mat trace_normal_flux_matrix(const CellBasis& cb, const FaceBasis& fb, const QuadRule& face_rule,
                             const Vec2& normal) {
  Mat m = Mat::Zero(cb.dim(), fb.dim());
  for (int q = 0; q < face_rule.size(); ++q) {
    const Vec flux = cb.eval_grad(face_rule.points[static_cast<size_t>(q)]) * normal;
    m.noalias() += face_rule.weights[static_cast<size_t>(q)] * flux *
                   fb.eval(face_rule.points[static_cast<size_t>(q)]).transpose();
  }
  return m;
}

}  // namespace uhho
