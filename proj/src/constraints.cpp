#include "riopt/constraints.hpp"

#include <limits>

namespace riopt {

GeodesicBall::GeodesicBall(ManifoldPtr manifold, Point center, Scalar radius)
    : manifold_(std::move(manifold)), center_(std::move(center)), radius_(radius) {
  if (!(radius > 0)) throw std::invalid_argument("GeodesicBall: radius must be positive");
  if (manifold_->membership_error(center_) > 1e-8) {
    throw std::invalid_argument("GeodesicBall: center is not on the manifold");
  }
}

bool GeodesicBall::contains(const Point& x, Scalar tol) const {
  return manifold_->dist(center_, x) <= radius_ + tol;
}

Point GeodesicBall::project(const Point& x) const {
  const Scalar d = manifold_->dist(center_, x);
  if (d <= radius_) return x;
  return manifold_->exp(center_, (radius_ / d) * manifold_->log(center_, x));
}

Scalar GeodesicBall::support_gap(const Point& x, const TangentVector& u) const {
  const TangentVector to_center = manifold_->log(x, center_);
  return manifold_->inner(u, to_center) + manifold_->norm(u) * radius_;
}

Scalar WholeManifold::squared_diameter_sum() const {
  return std::numeric_limits<Scalar>::infinity();
}

Scalar WholeManifold::support_gap(const Point&, const TangentVector& u) const {
  if (manifold_->norm(u) == 0) return 0;
  return std::numeric_limits<Scalar>::infinity();
}

ProductSet::ProductSet(std::shared_ptr<const ProductManifold> manifold,
                       std::vector<ConstraintSetPtr> components)
    : manifold_(std::move(manifold)), components_(std::move(components)) {
  if (components_.size() != manifold_->component_count()) {
    throw std::invalid_argument("ProductSet: component count mismatch");
  }
}

ProductSet::ProductSet(std::shared_ptr<const ProductManifold> manifold, ConstraintSetPtr first,
                       ConstraintSetPtr second)
    : ProductSet(std::move(manifold),
                 std::vector<ConstraintSetPtr>{std::move(first), std::move(second)}) {}

bool ProductSet::contains(const Point& x, Scalar tol) const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!components_[i]->contains(manifold_->block(x, i), tol)) return false;
  }
  return true;
}

Point ProductSet::project(const Point& x) const {
  Vec out(x.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    out.segment(manifold_->offset(i), manifold_->component(i)->ambient_dim()) =
        components_[i]->project(manifold_->block(x, i));
  }
  return out;
}

std::optional<Scalar> ProductSet::diameter() const {
  Scalar total = 0;
  for (const auto& c : components_) {
    const auto d = c->diameter();
    if (!d) return std::nullopt;
    total += *d;
  }
  return total;
}

Scalar ProductSet::squared_diameter_sum() const {
  Scalar total = 0;
  for (const auto& c : components_) total += c->squared_diameter_sum();
  return total;
}

Scalar ProductSet::support_gap(const Point& x, const TangentVector& u) const {
  Scalar total = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Vec xb = manifold_->block(x, i);
    total += components_[i]->support_gap(xb, {xb, manifold_->block(u.coords, i)});
  }
  return total;
}

}  // namespace riopt
