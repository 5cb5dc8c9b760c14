#pragma once

#include "riopt/rioda.hpp"
#include "riopt/rng.hpp"

namespace riopt {

/// A min-max instance with known solution for tests and the minmax CLI.
struct TestSaddle {
  SaddleOracle oracle;
  ManifoldPtr manifold_x, manifold_y;
  ConstraintSetPtr set_x, set_y;
  Point xstar, ystar;
  Point x1, y1;
  Scalar smoothness = 0;
  Scalar mu = 0;
  Scalar initial_distance = 0;  // R = d(x1,x*) + d(y1,y*)
  /// Closed-form full duality gap over the sets; null when unavailable.
  std::function<Scalar(const Point&, const Point&)> exact_gap;
};

/// f(x, y) = x^T B y with |B|_2 = 1 over two balls containing the saddle
/// (0, 0) near their boundary; merely convex-concave, gap of averages decays
/// like 1/T.
TestSaddle euclidean_bilinear_saddle(int dim, Scalar ball_radius, const Rng& rng);

/// f = (alpha/2)|x-a|^2 + x^T B y - (alpha/2)|y-b|^2 with closed-form saddle
/// from the stationarity system; L = max(alpha, |B|), mu = alpha.
TestSaddle euclidean_quadratic_saddle(int dim, Scalar alpha, Scalar coupling, Scalar ball_radius,
                                      const Rng& rng);

/// Separable f = (1/2) x^T A x - (1/2) y^T C y with spectra in [mu, L];
/// saddle (0,0), exact gap (1/2) x^T A x + (1/2) y^T C y while the origin is
/// feasible for both sets.
TestSaddle euclidean_separable_quadratic_saddle(int dim, Scalar mu, Scalar smoothness,
                                                Scalar ball_radius, const Rng& rng);

/// Busemann saddle on the hyperboloid: f(x,y) = b_xi(x) - b_nu(y) for ideal
/// points xi, nu; 1-smooth, convex-concave but not strongly. The constrained
/// solution sits on each ball boundary along the ray toward the ideal point,
/// and the gap has the closed form b(x) - b(x*) summed over blocks.
TestSaddle hyperbolic_busemann_saddle(int dim, Scalar ball_radius, const Rng& rng);

/// f(x,y) = (1/2) d(x,p)^2 - (1/2) d(y,q)^2 on any Hadamard manifold; saddle
/// (p, q), mu = 1, L = zeta at the working radius. Constrained (balls of the
/// given radius around random centers with the targets inside) or
/// unconstrained.
TestSaddle separable_distance_saddle(ManifoldPtr m, Scalar start_distance, bool constrained,
                                     Scalar ball_radius, const Rng& rng);

/// Fills a MinMaxConfig from a TestSaddle (sets, initial points, constants).
MinMaxConfig config_for(const TestSaddle& saddle);

}  // namespace riopt
