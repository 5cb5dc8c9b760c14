#pragma once

#include <vector>

#include "riopt/manifold.hpp"

namespace riopt {

/// Cartesian product with the l2 product metric: coordinates are the
/// concatenated component coordinates, dist^2 is the sum of component dist^2,
/// and all maps act blockwise.
class ProductManifold final : public Manifold {
 public:
  explicit ProductManifold(std::vector<ManifoldPtr> components);
  ProductManifold(ManifoldPtr first, ManifoldPtr second);

  /// n identical copies of one factor.
  static std::shared_ptr<const ProductManifold> power(ManifoldPtr factor, int n);

  std::string name() const override;
  Eigen::Index ambient_dim() const override { return total_dim_; }
  Eigen::Index intrinsic_dim() const override;
  CurvatureBounds curvature_bounds() const override { return bounds_; }

  std::size_t component_count() const { return components_.size(); }
  const ManifoldPtr& component(std::size_t i) const { return components_[i]; }
  const Manifold& first() const { return *components_.front(); }
  const Manifold& second() const { return *components_.back(); }

  Eigen::Index offset(std::size_t i) const { return offsets_[i]; }
  Vec block(const Vec& x, std::size_t i) const;
  Vec concat(const std::vector<Vec>& blocks) const;

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
  std::vector<ManifoldPtr> components_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index total_dim_ = 0;
  CurvatureBounds bounds_;
};

}  // namespace riopt
