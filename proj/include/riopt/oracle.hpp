#pragma once

#include <functional>
#include <optional>

#include "riopt/manifold.hpp"

namespace riopt {

/// Marks an oracle of the form (weight/2) * d(x, point)^2; lets solvers use
/// closed forms where available.
struct QuadraticDistanceForm {
  Point point;
  Scalar weight = 1;
};

/// First-order oracle for a g-convex function with declared constants.
/// `gradient` returns tangent coordinates at the query point.
struct ObjectiveOracle {
  std::function<Scalar(const Point&)> value;
  std::function<Vec(const Point&)> gradient;
  Scalar smoothness = 0;         // L
  Scalar strong_convexity = 0;   // mu
  /// rho >= 0 such that f + (rho/2) d(., z)^2 is g-convex on the working set;
  /// 0 for g-convex oracles. Optimality certificates widen by this deficit.
  Scalar weak_convexity_deficit = 0;
  std::optional<Scalar> lipschitz;
  std::optional<QuadraticDistanceForm> quad_form;
};

/// Oracle for a g-convex, g-concave bi-function f(x, y).
struct SaddleOracle {
  std::function<Scalar(const Point&, const Point&)> value;
  std::function<Vec(const Point&, const Point&)> grad_x;
  std::function<Vec(const Point&, const Point&)> grad_y;
  Scalar smoothness = 0;        // L
  Scalar strong_convexity = 0;  // mu (SCSC modulus, 0 when merely convex-concave)
  std::optional<Scalar> lipschitz;
  /// Weak-convexity deficits of the sections f(., y) resp. -f(x, .) as a
  /// function of the frozen variable; null means exactly g-convex/g-concave.
  std::function<Scalar(const Point& y)> x_section_deficit;
  std::function<Scalar(const Point& x)> y_section_deficit;
};

ObjectiveOracle zero_oracle(ManifoldPtr m);

/// (weight/2) * d(x, target)^2; smoothness is weight * zeta at the given
/// working radius, strong convexity weight (Hadamard).
ObjectiveOracle squared_distance_oracle(ManifoldPtr m, Point target, Scalar weight,
                                        Scalar working_radius);

/// Pointwise sum; constants add.
ObjectiveOracle sum_oracles(std::vector<ObjectiveOracle> terms);

/// f(., y) as a plain objective in x.
ObjectiveOracle x_section(const SaddleOracle& f, Point y);
/// -f(x, .) as a plain objective in y (so the maximizing block is a
/// minimization).
ObjectiveOracle neg_y_section(const SaddleOracle& f, Point x);

/// Forward difference (f(exp(x, h v)) - f(x)) / h along a unit tangent v.
Scalar finite_diff_directional(const Manifold& m, const ObjectiveOracle& f, const Point& x,
                               const TangentVector& v, Scalar h);

/// Central difference, used by gradient checks.
Scalar central_diff_directional(const Manifold& m, const ObjectiveOracle& f, const Point& x,
                                const TangentVector& v, Scalar h);

}  // namespace riopt
