#include "riopt/saddles.hpp"

#include <Eigen/Dense>

#include "riopt/euclidean.hpp"
#include "riopt/hyperbolic.hpp"

namespace riopt {

namespace {

Mat random_matrix_unit_norm(int dim, Rng& rng) {
  Mat b(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) b(i, j) = rng.gaussian();
  const Scalar spectral = b.jacobiSvd().singularValues()[0];
  return b / spectral;
}

}  // namespace

MinMaxConfig config_for(const TestSaddle& saddle) {
  MinMaxConfig cfg;
  cfg.manifold_x = saddle.manifold_x;
  cfg.manifold_y = saddle.manifold_y;
  cfg.set_x = saddle.set_x;
  cfg.set_y = saddle.set_y;
  cfg.smoothness = saddle.smoothness;
  cfg.mu = saddle.mu;
  cfg.kappa_min = std::min(saddle.manifold_x->kappa_min(), saddle.manifold_y->kappa_min());
  cfg.x1 = saddle.x1;
  cfg.y1 = saddle.y1;
  cfg.initial_distance = saddle.initial_distance;
  cfg.reference_saddle = std::make_pair(saddle.xstar, saddle.ystar);
  return cfg;
}

TestSaddle euclidean_bilinear_saddle(int dim, Scalar ball_radius, const Rng& rng) {
  Rng r = rng.split("bilinear");
  auto m = std::make_shared<EuclideanSpace>(dim);
  const Mat b = random_matrix_unit_norm(dim, r);

  TestSaddle s;
  s.manifold_x = m;
  s.manifold_y = m;
  s.oracle.value = [b](const Point& x, const Point& y) { return x.dot(b * y); };
  s.oracle.grad_x = [b](const Point&, const Point& y) { return (b * y).eval(); };
  s.oracle.grad_y = [b](const Point& x, const Point&) { return (b.transpose() * x).eval(); };
  s.oracle.smoothness = 1.0;
  s.oracle.strong_convexity = 0.0;

  const Vec ux = r.gaussian_vector(dim).normalized();
  const Vec uy = r.gaussian_vector(dim).normalized();
  const Vec cx = 0.9 * ball_radius * ux;
  const Vec cy = 0.9 * ball_radius * uy;
  s.set_x = std::make_shared<GeodesicBall>(m, cx, ball_radius);
  s.set_y = std::make_shared<GeodesicBall>(m, cy, ball_radius);
  s.xstar = Vec::Zero(dim);
  s.ystar = Vec::Zero(dim);
  s.x1 = cx;
  s.y1 = cy;
  s.smoothness = 1.0;
  s.mu = 0.0;
  s.initial_distance = cx.norm() + cy.norm();
  s.oracle.lipschitz = 1.9 * ball_radius;

  s.exact_gap = [b, cx, cy, ball_radius](const Point& x, const Point& y) {
    const Scalar up = x.dot(b * cy) + ball_radius * (b.transpose() * x).norm();
    const Scalar low = cx.dot(b * y) - ball_radius * (b * y).norm();
    return up - low;
  };
  return s;
}

TestSaddle euclidean_quadratic_saddle(int dim, Scalar alpha, Scalar coupling, Scalar ball_radius,
                                      const Rng& rng) {
  Rng r = rng.split("quadratic-coupled");
  auto m = std::make_shared<EuclideanSpace>(dim);
  const Mat b = coupling * random_matrix_unit_norm(dim, r);
  const Vec a = r.gaussian_vector(dim);
  const Vec c = r.gaussian_vector(dim);

  TestSaddle s;
  s.manifold_x = m;
  s.manifold_y = m;
  s.oracle.value = [alpha, b, a, c](const Point& x, const Point& y) {
    return 0.5 * alpha * (x - a).squaredNorm() + x.dot(b * y) - 0.5 * alpha * (y - c).squaredNorm();
  };
  s.oracle.grad_x = [alpha, b, a](const Point& x, const Point& y) {
    return (alpha * (x - a) + b * y).eval();
  };
  s.oracle.grad_y = [alpha, b, c](const Point& x, const Point& y) {
    return (b.transpose() * x - alpha * (y - c)).eval();
  };
  s.smoothness = std::max(alpha, coupling);
  s.mu = alpha;
  s.oracle.smoothness = s.smoothness;
  s.oracle.strong_convexity = alpha;

  // stationarity: alpha(x-a) + By = 0, B^T x - alpha(y-c) = 0
  const Mat lhs = alpha * alpha * Mat::Identity(dim, dim) + b * b.transpose();
  s.xstar = lhs.ldlt().solve(alpha * alpha * a - alpha * b * c);
  s.ystar = c + b.transpose() * s.xstar / alpha;

  s.set_x = std::make_shared<GeodesicBall>(m, s.xstar, ball_radius);
  s.set_y = std::make_shared<GeodesicBall>(m, s.ystar, ball_radius);
  Rng rs = r.split("start");
  s.x1 = s.set_x->project(s.xstar + 0.5 * ball_radius * rs.gaussian_vector(dim).normalized());
  s.y1 = s.set_y->project(s.ystar + 0.5 * ball_radius * rs.gaussian_vector(dim).normalized());
  s.initial_distance = (s.x1 - s.xstar).norm() + (s.y1 - s.ystar).norm();

  s.exact_gap = [alpha, b, a, c](const Point& x, const Point& y) {
    const Scalar up = 0.5 * alpha * (x - a).squaredNorm() + x.dot(b * c) +
                      (b.transpose() * x).squaredNorm() / (2 * alpha);
    const Scalar low = -(b * y).squaredNorm() / (2 * alpha) + a.dot(b * y) -
                       0.5 * alpha * (y - c).squaredNorm();
    return up - low;
  };
  return s;
}

TestSaddle euclidean_separable_quadratic_saddle(int dim, Scalar mu, Scalar smoothness,
                                                Scalar ball_radius, const Rng& rng) {
  if (dim < 2) throw std::invalid_argument("separable quadratic saddle needs dim >= 2");
  Rng r = rng.split("separable-quadratic");
  auto m = std::make_shared<EuclideanSpace>(dim);
  Vec eigs(dim);
  for (int i = 0; i < dim; ++i) {
    eigs[i] = mu + (smoothness - mu) * static_cast<Scalar>(i) / static_cast<Scalar>(dim - 1);
  }

  TestSaddle s;
  s.manifold_x = m;
  s.manifold_y = m;
  s.oracle.value = [eigs](const Point& x, const Point& y) {
    return 0.5 * x.dot(eigs.asDiagonal() * x) - 0.5 * y.dot(eigs.asDiagonal() * y);
  };
  s.oracle.grad_x = [eigs](const Point& x, const Point&) {
    return (eigs.asDiagonal() * x).eval();
  };
  s.oracle.grad_y = [eigs](const Point&, const Point& y) {
    return (-(eigs.asDiagonal() * y)).eval();
  };
  s.smoothness = smoothness;
  s.mu = mu;
  s.oracle.smoothness = smoothness;
  s.oracle.strong_convexity = mu;

  s.xstar = Vec::Zero(dim);
  s.ystar = Vec::Zero(dim);
  s.set_x = std::make_shared<GeodesicBall>(m, s.xstar, ball_radius);
  s.set_y = std::make_shared<GeodesicBall>(m, s.ystar, ball_radius);
  s.x1 = 0.5 * ball_radius * r.gaussian_vector(dim).normalized();
  s.y1 = 0.5 * ball_radius * r.gaussian_vector(dim).normalized();
  s.initial_distance = s.x1.norm() + s.y1.norm();

  s.exact_gap = [eigs](const Point& x, const Point& y) {
    return 0.5 * x.dot(eigs.asDiagonal() * x) + 0.5 * y.dot(eigs.asDiagonal() * y);
  };
  return s;
}

namespace {

// b(x) = ln(-<x, xi>_M) for a null direction xi; unit-norm convex gradient
// x + xi / <x, xi>_M.
struct Busemann {
  Vec xi;
  Scalar value(const Point& x) const { return std::log(-HyperbolicSpace::minkowski(x, xi)); }
  Vec grad(const Point& x) const {
    return (x + xi / HyperbolicSpace::minkowski(x, xi)).eval();
  }
};

Vec random_null_direction(int dim, Rng& rng) {
  Vec xi(dim + 1);
  xi[0] = 1;
  xi.tail(dim) = rng.gaussian_vector(dim).normalized();
  return xi;
}

}  // namespace

TestSaddle hyperbolic_busemann_saddle(int dim, Scalar ball_radius, const Rng& rng) {
  Rng r = rng.split("busemann");
  auto m = std::make_shared<HyperbolicSpace>(dim);
  const Busemann bx{random_null_direction(dim, r)};
  const Busemann by{random_null_direction(dim, r)};

  TestSaddle s;
  s.manifold_x = m;
  s.manifold_y = m;
  s.oracle.value = [bx, by](const Point& x, const Point& y) { return bx.value(x) - by.value(y); };
  s.oracle.grad_x = [bx](const Point& x, const Point&) { return bx.grad(x); };
  s.oracle.grad_y = [by](const Point&, const Point& y) { return (-by.grad(y)).eval(); };
  s.smoothness = 1.0;
  s.mu = 0.0;
  s.oracle.smoothness = 1.0;
  s.oracle.strong_convexity = 0.0;
  s.oracle.lipschitz = 1.0;  // Busemann gradients have unit norm

  const Point cx = m->random_point(r);
  const Point cy = m->random_point(r);
  s.set_x = std::make_shared<GeodesicBall>(m, cx, ball_radius);
  s.set_y = std::make_shared<GeodesicBall>(m, cy, ball_radius);

  // constrained minimizer of a Busemann function over a ball: walk the
  // steepest-descent geodesic to the boundary
  s.xstar = m->exp(cx, ball_radius * m->make_tangent(cx, -bx.grad(cx)));
  s.ystar = m->exp(cy, ball_radius * m->make_tangent(cy, -by.grad(cy)));
  s.x1 = cx;
  s.y1 = cy;
  s.initial_distance = 2 * ball_radius;

  const Scalar fx_star = bx.value(s.xstar);
  const Scalar fy_star = by.value(s.ystar);
  s.exact_gap = [bx, by, fx_star, fy_star](const Point& x, const Point& y) {
    return (bx.value(x) - fx_star) + (by.value(y) - fy_star);
  };
  return s;
}

TestSaddle separable_distance_saddle(ManifoldPtr m, Scalar start_distance, bool constrained,
                                     Scalar ball_radius, const Rng& rng) {
  Rng r = rng.split("separable-distance");
  const Point p = m->random_point(r);
  const Point q = m->random_point(r);
  const Scalar working = 2 * (start_distance + ball_radius) + 4.0;

  TestSaddle s;
  s.manifold_x = m;
  s.manifold_y = m;
  s.oracle.value = [m, p, q](const Point& x, const Point& y) {
    const Scalar dx = m->dist(x, p), dy = m->dist(y, q);
    return 0.5 * dx * dx - 0.5 * dy * dy;
  };
  s.oracle.grad_x = [m, p](const Point& x, const Point&) {
    return (-m->log(x, p).coords).eval();
  };
  s.oracle.grad_y = [m, q](const Point&, const Point& y) { return m->log(y, q).coords; };
  s.smoothness = zeta(working, m->kappa_min());
  s.mu = 1.0;
  s.oracle.smoothness = s.smoothness;
  s.oracle.strong_convexity = 1.0;
  s.oracle.lipschitz = working;

  s.xstar = p;
  s.ystar = q;
  if (constrained) {
    s.set_x = std::make_shared<GeodesicBall>(m, p, ball_radius);
    s.set_y = std::make_shared<GeodesicBall>(m, q, ball_radius);
  } else {
    s.set_x = std::make_shared<WholeManifold>(m);
    s.set_y = std::make_shared<WholeManifold>(m);
  }
  const Scalar offset = constrained ? std::min(start_distance, 0.9 * ball_radius) : start_distance;
  s.x1 = m->exp(p, offset * m->random_unit_tangent(p, r));
  s.y1 = m->exp(q, offset * m->random_unit_tangent(q, r));
  s.initial_distance = m->dist(s.x1, p) + m->dist(s.y1, q);

  s.exact_gap = [m, p, q](const Point& x, const Point& y) {
    const Scalar dx = m->dist(x, p), dy = m->dist(y, q);
    return 0.5 * dx * dx + 0.5 * dy * dy;
  };
  return s;
}

}  // namespace riopt
