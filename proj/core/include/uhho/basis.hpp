#pragma once

#include "uhho/cut.hpp"

#include <functional>

namespace uhho {

inline int poly_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Polynomial basis of P^l on a cell or sub-cell. Functions are scaled
/// monomials in the owning cell's frame ((x - center)/h)^alpha, orthonormalized
/// against the sub-domain mass matrix by a Cholesky factorization of the Gram
/// matrix. The Cholesky route keeps the degree flag: the first dim(l') basis
/// functions span exactly P^{l'} for every l' <= l.
class CellBasis {
 public:
  CellBasis() = default;
  CellBasis(int degree, const Vec2& center, double h);

  int degree() const { return degree_; }
  int dim() const { return poly_space_dim(degree_); }
  const Vec2& center() const { return center_; }
  double h() const { return h_; }

  Vec eval(const Vec2& x) const;                       // basis values
  Eigen::Matrix<double, Eigen::Dynamic, 2> eval_grad(const Vec2& x) const;

  /// Orthonormalizes against the mass matrix induced by `rule`; the rule must
  /// integrate degree 2l exactly on the sub-domain. Throws when the Gram
  /// matrix is numerically singular (condition above ~1e14), which signals a
  /// failed delta-ball condition on the sub-domain.
  void orthonormalize(const QuadRule& rule);

  double gram_condition() const { return gram_cond_; }

 private:
  int degree_ = 0;
  Vec2 center_ = Vec2::Zero();
  double h_ = 1.0;
  Mat coeff_;  // basis = coeff * scaled monomials
  double gram_cond_ = 1.0;
};

/// P^k basis on a (sub-)face, in the sub-segment's own frame (midpoint +
/// half-length of the covering interval), orthonormal for the L2 inner
/// product over the sub-face (which may consist of two intervals when the
/// interface enters and leaves through the same face).
class FaceBasis {
 public:
  FaceBasis() = default;
  FaceBasis(int degree, std::span<const Segment> segs);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }
  const std::vector<Segment>& segments() const { return segs_; }
  double measure() const { return measure_; }

  Vec eval(const Vec2& x) const;
  QuadRule quadrature(int npoints) const;  // concatenated Gauss over the intervals

 private:
  int degree_ = 0;
  Vec2 origin_ = Vec2::Zero();
  Vec2 dir_ = Vec2::UnitX();
  double half_ = 1.0;
  Mat coeff_;
  std::vector<Segment> segs_;
  double measure_ = 0.0;
};

CellBasis make_cell_basis(int degree, const Vec2& center, double h, const QuadRule& mass_rule);

Vec project_cell(const std::function<double(const Vec2&)>& f, const CellBasis& basis,
                 const QuadRule& rule);
Vec project_face(const std::function<double(const Vec2&)>& f, const FaceBasis& basis,
                 int quad_points = 0);

/// (value trace, face basis) couplings: M[j,i] = int_F fb_j cb_i.
Mat trace_value_matrix(const CellBasis& cb, const FaceBasis& fb, const QuadRule& face_rule);
/// (normal-gradient trace, face basis) couplings: G[i,j] = int_F (grad cb_i . n) fb_j.
Mat trace_normal_flux_matrix(const CellBasis& cb, const FaceBasis& fb, const QuadRule& face_rule,
                             const Vec2& normal);

}  // namespace uhho
