#pragma once

#include "riopt/manifold.hpp"

namespace riopt {

class EuclideanSpace final : public Manifold {
 public:
  explicit EuclideanSpace(Eigen::Index dim);

  std::string name() const override;
  Eigen::Index ambient_dim() const override { return dim_; }
  Eigen::Index intrinsic_dim() const override { return dim_; }
  CurvatureBounds curvature_bounds() const override { return {0, 0}; }

  Vec dlog_adjoint(const Point& x, const Point& y, const Vec& u) const override;

 protected:
  Vec exp_impl(const Point& x, const Vec& v) const override { return x + v; }
  Vec log_impl(const Point& x, const Point& y) const override { return y - x; }
  Scalar dist_impl(const Point& x, const Point& y) const override { return (y - x).norm(); }
  Vec transport_impl(const Point&, const Point&, const Vec& v) const override { return v; }
  Scalar inner_impl(const Point&, const Vec& u, const Vec& v) const override { return u.dot(v); }
  Scalar membership_error_impl(const Point&) const override { return 0; }
  Point project_to_manifold_impl(const Point& x) const override { return x; }
  Vec project_to_tangent_impl(const Point&, const Vec& coords) const override { return coords; }
  Point random_point_impl(Rng& rng) const override { return rng.gaussian_vector(dim_); }
  Vec random_tangent_impl(const Point&, Rng& rng) const override {
    return rng.gaussian_vector(dim_);
  }

 private:
  Eigen::Index dim_;
};

}  // namespace riopt
