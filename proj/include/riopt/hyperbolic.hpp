#pragma once

#include "riopt/manifold.hpp"

namespace riopt {

/// d-dimensional hyperbolic space of curvature -1 in the hyperboloid model:
/// points x in R^{d+1} with <x,x>_M = -1 and x_0 > 0, where
/// <a,b>_M = -a_0 b_0 + sum_i a_i b_i is the Minkowski form. Tangent vectors
/// at x are Minkowski-orthogonal to x and the metric is the restricted form.
class HyperbolicSpace final : public Manifold {
 public:
  explicit HyperbolicSpace(Eigen::Index dim);

  std::string name() const override;
  Eigen::Index ambient_dim() const override { return dim_ + 1; }
  Eigen::Index intrinsic_dim() const override { return dim_; }
  CurvatureBounds curvature_bounds() const override { return {-1, -1}; }

  static Scalar minkowski(const Vec& a, const Vec& b);

  Vec dlog_adjoint(const Point& x, const Point& y, const Vec& u) const override;

 protected:
  Vec exp_impl(const Point& x, const Vec& v) const override;
  Vec log_impl(const Point& x, const Point& y) const override;
  Scalar dist_impl(const Point& x, const Point& y) const override;
  Vec transport_impl(const Point& x, const Point& y, const Vec& v) const override;
  Scalar inner_impl(const Point&, const Vec& u, const Vec& v) const override {
    return minkowski(u, v);
  }
  Scalar membership_error_impl(const Point& x) const override;
  Point project_to_manifold_impl(const Point& x) const override;
  Vec project_to_tangent_impl(const Point& x, const Vec& coords) const override;
  Point random_point_impl(Rng& rng) const override;
  Vec random_tangent_impl(const Point& x, Rng& rng) const override;

 private:
  Eigen::Index dim_;
};

}  // namespace riopt
