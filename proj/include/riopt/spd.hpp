#pragma once

#include "riopt/manifold.hpp"

namespace riopt {

/// Symmetric eigendecomposition A = Q diag(lambda) Q^T.
struct SymEig {
  Vec eigenvalues;
  Mat eigenvectors;
};

SymEig spd_sym_eig(const Mat& a);

/// Matrix exponential of a symmetric matrix.
Mat spd_expm(const Mat& a);
/// Matrix logarithm of a symmetric positive definite matrix.
/// Throws std::domain_error (reporting the smallest eigenvalue) if not PD.
Mat spd_logm(const Mat& a);
/// Principal square root of a symmetric positive definite matrix.
Mat spd_sqrtm(const Mat& a);

/// Symmetric positive definite d x d matrices with the affine-invariant
/// metric <U,V>_X = tr(X^-1 U X^-1 V). Ambient coordinates are the d*d
/// entries in column-major order; tangent vectors are symmetric matrices.
/// Sectional curvature lies in [-1/2, 0].
class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(Eigen::Index d);

  std::string name() const override;
  Eigen::Index ambient_dim() const override { return d_ * d_; }
  Eigen::Index intrinsic_dim() const override { return d_ * (d_ + 1) / 2; }
  CurvatureBounds curvature_bounds() const override { return {-0.5, 0}; }

  Eigen::Index matrix_dim() const { return d_; }

  Mat to_matrix(const Vec& x) const;
  Vec to_vec(const Mat& m) const;

  Vec dlog_adjoint(const Point& x, const Point& y, const Vec& u) const override;

 protected:
  Vec exp_impl(const Point& x, const Vec& v) const override;
  Vec log_impl(const Point& x, const Point& y) const override;
  Scalar dist_impl(const Point& x, const Point& y) const override;
  Vec transport_impl(const Point& x, const Point& y, const Vec& v) const override;
  Scalar inner_impl(const Point& x, const Vec& u, const Vec& v) const override;
  Scalar membership_error_impl(const Point& x) const override;
  Point project_to_manifold_impl(const Point& x) const override;
  Vec project_to_tangent_impl(const Point& x, const Vec& coords) const override;
  Point random_point_impl(Rng& rng) const override;
  Vec random_tangent_impl(const Point& x, Rng& rng) const override;

 private:
  Eigen::Index d_;
};

}  // namespace riopt
