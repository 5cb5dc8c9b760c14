#pragma once

#include <optional>
#include <vector>

#include "riopt/manifold.hpp"
#include "riopt/product.hpp"

namespace riopt {

/// A g-convex feasible set with membership and metric projection. Projection
/// is nonexpansive on Hadamard manifolds and idempotent.
class ConstraintSet {
 public:
  virtual ~ConstraintSet() = default;

  virtual const Manifold& manifold() const = 0;
  virtual bool contains(const Point& x, Scalar tol = 1e-10) const = 0;
  virtual Point project(const Point& x) const = 0;

  /// nullopt signals an unbounded (unconstrained) set.
  virtual std::optional<Scalar> diameter() const = 0;

  /// Sum of squared component diameters (a ball counts once); tightens
  /// weak-convexity corrections on products of small balls.
  virtual Scalar squared_diameter_sum() const = 0;

  /// Upper bound on sup_{z in set} <u, log_x(z)>_x. Used as a computable
  /// optimality certificate: for g-convex f, f(x) - min_set f <=
  /// support_gap(x, -grad f(x)). Returns +inf for unbounded sets with u != 0.
  virtual Scalar support_gap(const Point& x, const TangentVector& u) const = 0;
};

using ConstraintSetPtr = std::shared_ptr<const ConstraintSet>;

class GeodesicBall final : public ConstraintSet {
 public:
  GeodesicBall(ManifoldPtr manifold, Point center, Scalar radius);

  const Manifold& manifold() const override { return *manifold_; }
  const Point& center() const { return center_; }
  Scalar radius() const { return radius_; }

  bool contains(const Point& x, Scalar tol = 1e-10) const override;
  Point project(const Point& x) const override;
  std::optional<Scalar> diameter() const override { return 2 * radius_; }
  Scalar squared_diameter_sum() const override { return 4 * radius_ * radius_; }
  Scalar support_gap(const Point& x, const TangentVector& u) const override;

 private:
  ManifoldPtr manifold_;
  Point center_;
  Scalar radius_;
};

/// The whole manifold; projection is the identity.
class WholeManifold final : public ConstraintSet {
 public:
  explicit WholeManifold(ManifoldPtr manifold) : manifold_(std::move(manifold)) {}

  const Manifold& manifold() const override { return *manifold_; }
  bool contains(const Point&, Scalar = 1e-10) const override { return true; }
  Point project(const Point& x) const override { return x; }
  std::optional<Scalar> diameter() const override { return std::nullopt; }
  Scalar squared_diameter_sum() const override;
  Scalar support_gap(const Point& x, const TangentVector& u) const override;

 private:
  ManifoldPtr manifold_;
};

/// Componentwise product of constraint sets over a ProductManifold.
class ProductSet final : public ConstraintSet {
 public:
  ProductSet(std::shared_ptr<const ProductManifold> manifold,
             std::vector<ConstraintSetPtr> components);
  ProductSet(std::shared_ptr<const ProductManifold> manifold, ConstraintSetPtr first,
             ConstraintSetPtr second);

  const Manifold& manifold() const override { return *manifold_; }
  const ProductManifold& product_manifold() const { return *manifold_; }
  std::size_t component_count() const { return components_.size(); }
  const ConstraintSetPtr& component(std::size_t i) const { return components_[i]; }

  bool contains(const Point& x, Scalar tol = 1e-10) const override;
  Point project(const Point& x) const override;
  std::optional<Scalar> diameter() const override;
  Scalar squared_diameter_sum() const override;
  Scalar support_gap(const Point& x, const TangentVector& u) const override;

 private:
  std::shared_ptr<const ProductManifold> manifold_;
  std::vector<ConstraintSetPtr> components_;
};

}  // namespace riopt
