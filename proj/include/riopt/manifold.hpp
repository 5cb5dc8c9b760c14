#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "riopt/geometry.hpp"
#include "riopt/rng.hpp"

namespace riopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point is its ambient coordinate vector; the owning manifold fixes the
/// interpretation (hyperboloid vectors in R^{d+1}, flattened d x d symmetric
/// matrices for SPD, concatenations for products).
using Point = Vec;

/// Tangent vector anchored at a base point, both in ambient coordinates.
struct TangentVector {
  Vec base;
  Vec coords;

  TangentVector() = default;
  TangentVector(Vec base_, Vec coords_) : base(std::move(base_)), coords(std::move(coords_)) {}
};

inline TangentVector operator*(Scalar s, const TangentVector& v) {
  return {v.base, s * v.coords};
}
inline TangentVector operator-(const TangentVector& v) { return {v.base, -v.coords}; }

class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hadamard manifold with exact exponential maps in ambient coordinates.
///
/// The public operations validate base points, repair floating-point drift
/// off the manifold (threshold 1e-12), and are pure: no shared mutable state,
/// safe to call from multiple threads.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index ambient_dim() const = 0;
  virtual Eigen::Index intrinsic_dim() const = 0;
  virtual CurvatureBounds curvature_bounds() const = 0;

  Scalar kappa_min() const { return curvature_bounds().kmin; }

  /// Follows the geodesic from v.base in direction v for length |v|.
  Point exp(const Point& x, const TangentVector& v) const;

  /// Inverse of exp; on Hadamard manifolds defined for every pair.
  TangentVector log(const Point& x, const Point& y) const;

  Scalar dist(const Point& x, const Point& y) const;

  /// Parallel transport of v from v.base to y along the connecting geodesic.
  TangentVector transport(const Point& y, const TangentVector& v) const;

  Scalar inner(const TangentVector& u, const TangentVector& v) const;
  Scalar norm(const TangentVector& v) const;

  /// Constant-speed geodesic point: exp(x, t*log(x, y)), t in [0, 1].
  Point geodesic_point(const Point& x, const Point& y, Scalar t) const;

  /// Wraps raw ambient coords as a tangent vector at x, projecting onto the
  /// tangent space.
  TangentVector make_tangent(const Point& x, const Vec& coords) const;
  TangentVector zero_tangent(const Point& x) const;

  /// Distance from the membership equation (0 on the manifold).
  Scalar membership_error(const Point& x) const { return membership_error_impl(x); }
  Scalar tangency_error(const Point& x, const Vec& coords) const;

  Point project_to_manifold(const Point& x) const { return project_to_manifold_impl(x); }
  Vec project_to_tangent(const Point& x, const Vec& coords) const {
    return project_to_tangent_impl(x, coords);
  }

  Point random_point(Rng& rng) const;
  TangentVector random_tangent(const Point& x, Rng& rng) const;
  TangentVector random_unit_tangent(const Point& x, Rng& rng) const;

  /// Riemannian gradient of y -> <u, log_x(y)>_x for fixed x and u in T_x.
  /// Backs the composite gradient-descent model on curved manifolds.
  virtual Vec dlog_adjoint(const Point& x, const Point& y, const Vec& u) const = 0;

 protected:
  virtual Vec exp_impl(const Point& x, const Vec& v) const = 0;
  virtual Vec log_impl(const Point& x, const Point& y) const = 0;
  virtual Scalar dist_impl(const Point& x, const Point& y) const;
  virtual Vec transport_impl(const Point& x, const Point& y, const Vec& v) const = 0;
  virtual Scalar inner_impl(const Point& x, const Vec& u, const Vec& v) const = 0;
  virtual Scalar membership_error_impl(const Point& x) const = 0;
  virtual Point project_to_manifold_impl(const Point& x) const = 0;
  virtual Vec project_to_tangent_impl(const Point& x, const Vec& coords) const = 0;
  virtual Point random_point_impl(Rng& rng) const = 0;
  virtual Vec random_tangent_impl(const Point& x, Rng& rng) const = 0;

  void check_base(const Point& x, const TangentVector& v, const char* op) const;
  Point repair(Point x) const;

  static constexpr Scalar kDriftThreshold = 1e-12;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// Parses "euclidean:3", "hyperbolic:50", "spd:5".
ManifoldPtr make_manifold(const std::string& spec);

}  // namespace riopt
