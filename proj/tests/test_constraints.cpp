#include <doctest.h>

#include "riopt/constraints.hpp"

using namespace riopt;

TEST_CASE("ball membership: center, boundary, outside") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  Vec c(2);
  c << 0, 0;
  const GeodesicBall ball(m, c, 1.0);
  CHECK(ball.contains(c));
  Vec boundary(2), outside(2);
  boundary << 1, 0;
  outside << 2, 0;
  CHECK(ball.contains(boundary));
  CHECK_FALSE(ball.contains(outside));
}

TEST_CASE("euclidean ball projection hits the boundary radially") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  Vec c(2), x(2);
  c << 0, 0;
  x << 2, 0;
  const GeodesicBall ball(m, c, 1.0);
  const Point p = ball.project(x);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
  Vec inside(2);
  inside << 0.2, 0.1;
  CHECK((ball.project(inside) - inside).norm() == 0.0);
}

TEST_CASE("projection distance identity d(c, proj) = min(r, d(c, x))") {
  for (const std::string spec : {"hyperbolic:4", "spd:3"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng(3);
    const Point c = m->random_point(rng);
    const GeodesicBall ball(m, c, 0.8);
    for (int i = 0; i < 15; ++i) {
      const Point x = m->exp(c, rng.uniform(0, 2.5) * m->random_unit_tangent(c, rng));
      const Scalar expected = std::min<Scalar>(0.8, m->dist(c, x));
      CHECK(m->dist(c, ball.project(x)) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("projection is idempotent and nonexpansive") {
  for (const std::string spec : {"euclidean:3", "hyperbolic:4", "spd:3"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng(9);
    const Point c = m->random_point(rng);
    const GeodesicBall ball(m, c, 1.0);
    for (int i = 0; i < 20; ++i) {
      const Point a = m->random_point(rng);
      const Point b = m->random_point(rng);
      CHECK(m->dist(ball.project(ball.project(a)), ball.project(a)) <= 1e-10);
      CHECK(m->dist(ball.project(a), ball.project(b)) <= m->dist(a, b) + 1e-9);
    }
  }
}

TEST_CASE("diameters: ball, product sum, unconstrained sentinel") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  Rng rng(1);
  const Point c = m->random_point(rng);
  auto b3 = std::make_shared<GeodesicBall>(m, c, 3.0);
  CHECK(b3->diameter().value() == 6.0);

  auto prod_m = std::make_shared<ProductManifold>(m, m);
  auto b1 = std::make_shared<GeodesicBall>(m, c, 1.0);
  auto b2 = std::make_shared<GeodesicBall>(m, c, 2.0);
  const ProductSet prod(prod_m, b1, b2);
  CHECK(prod.diameter().value() == 6.0);
  CHECK(prod.squared_diameter_sum() == doctest::Approx(4.0 + 16.0));

  const WholeManifold whole(m);
  CHECK_FALSE(whole.diameter().has_value());
  const Point anything = m->random_point(rng);
  CHECK((whole.project(anything) - anything).norm() == 0.0);
}

TEST_CASE("product set projects componentwise and checks membership jointly") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  Vec c1(2), c2(2);
  c1 << 0, 0;
  c2 << 5, 5;
  auto prod_m = std::make_shared<ProductManifold>(m, m);
  const ProductSet prod(prod_m, std::make_shared<GeodesicBall>(m, c1, 1.0),
                        std::make_shared<GeodesicBall>(m, c2, 1.0));
  Vec x(4);
  x << 3, 0, 5, 5;
  CHECK_FALSE(prod.contains(x));
  const Point p = prod.project(x);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[2] == doctest::Approx(5.0));
  CHECK(prod.contains(p));
}

TEST_CASE("support gap upper-bounds the ball linear maximum") {
  for (const std::string spec : {"euclidean:3", "hyperbolic:3"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng(77);
    const Point c = m->random_point(rng);
    const GeodesicBall ball(m, c, 0.7);
    for (int i = 0; i < 10; ++i) {
      const Point x = m->exp(c, rng.uniform(0, 1.5) * m->random_unit_tangent(c, rng));
      const TangentVector u = m->random_tangent(x, rng);
      const Scalar bound = ball.support_gap(x, u);
      for (int j = 0; j < 30; ++j) {
        const Point z =
            m->exp(c, rng.uniform(0, 0.7) * m->random_unit_tangent(c, rng));
        CHECK(m->inner(u, m->log(x, z)) <= bound + 1e-9);
      }
    }
  }
}
