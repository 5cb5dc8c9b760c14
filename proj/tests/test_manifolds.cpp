#include <doctest.h>

#include <Eigen/Dense>

#include "riopt/hyperbolic.hpp"
#include "riopt/product.hpp"
#include "riopt/spd.hpp"

using namespace riopt;

TEST_CASE("random points are deterministic per seed and valid") {
  for (const std::string spec : {"euclidean:5", "hyperbolic:7", "spd:4"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng a(99), b(99), c(100);
    const Point pa = m->random_point(a);
    const Point pb = m->random_point(b);
    const Point pc = m->random_point(c);
    CHECK((pa - pb).norm() == 0.0);
    CHECK((pa - pc).norm() > 0.0);
    CHECK(m->membership_error(pa) <= 1e-10);
  }
}

TEST_CASE("spd random points have spectral norm of the log bounded by 1") {
  SpdManifold m(4);
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const Mat x = m.to_matrix(m.random_point(rng));
    const SymEig eig = spd_sym_eig(x);
    CHECK(eig.eigenvalues.minCoeff() > 0.0);
    CHECK(eig.eigenvalues.array().log().abs().maxCoeff() <= 1.0 + 1e-9);
  }
}

TEST_CASE("sym eigendecomposition reconstructs the input") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Mat g(5, 5);
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) g(i, j) = rng.gaussian();
    const Mat a = 0.5 * (g + g.transpose());
    const SymEig eig = spd_sym_eig(a);
    const Mat rec =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((rec - a).norm() <= 1e-9 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("matrix function kernels on diagonal cases") {
  CHECK(spd_logm(Mat::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
  Mat d(2, 2);
  d << 1, 0, 0, 2;
  const Mat e = spd_expm(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)));
  Mat s(2, 2);
  s << 4, 0, 0, 9;
  const Mat r = spd_sqrtm(s);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("expm and logm invert each other") {
  Rng rng(12);
  for (int trial = 0; trial < 8; ++trial) {
    Mat g(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) g(i, j) = 0.8 * rng.gaussian();
    const Mat sym = 0.5 * (g + g.transpose());
    const Mat x = spd_expm(sym);
    CHECK((spd_expm(spd_logm(x)) - x).norm() <= 1e-8 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("logm and sqrtm reject indefinite input and report the eigenvalue") {
  Mat bad(2, 2);
  bad << 1, 0, 0, -2;
  CHECK_THROWS_WITH_AS(spd_logm(bad), doctest::Contains("-2"), std::domain_error);
  CHECK_THROWS_AS(spd_sqrtm(bad), std::domain_error);
}

TEST_CASE("spd distance is affine invariant") {
  SpdManifold m(3);
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec xv = m.random_point(rng);
    const Vec yv = m.random_point(rng);
    Mat a(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) a(i, j) = rng.gaussian();
    a += 3.5 * Mat::Identity(3, 3);  // keep it comfortably invertible
    const Mat x = m.to_matrix(xv), y = m.to_matrix(yv);
    const Vec xt = m.to_vec((a * x * a.transpose()).eval());
    const Vec yt = m.to_vec((a * y * a.transpose()).eval());
    CHECK(m.dist(xt, yt) == doctest::Approx(m.dist(xv, yv)).epsilon(1e-7));
  }
}

TEST_CASE("hyperboloid geodesic line through the apex is an isometric ray") {
  HyperbolicSpace m(3);
  const auto on_line = [](Scalar a) {
    Vec p(4);
    p << std::cosh(a), std::sinh(a), 0, 0;
    return p;
  };
  for (const auto [a, b] : {std::pair{0.5, 2.0}, {1.0, 3.5}, {-0.0, 4.0}}) {
    CHECK(m.dist(on_line(a), on_line(b)) == doctest::Approx(std::abs(a - b)).epsilon(1e-9));
  }
}

TEST_CASE("product manifold distance is exactly the componentwise sum of squares") {
  const ManifoldPtr h = make_manifold("hyperbolic:3");
  const ManifoldPtr e = make_manifold("euclidean:2");
  const auto prod = std::make_shared<ProductManifold>(h, e);
  Rng rng(8);
  const Point a = prod->random_point(rng);
  const Point b = prod->random_point(rng);
  const Scalar d1 = h->dist(prod->block(a, 0), prod->block(b, 0));
  const Scalar d2 = e->dist(prod->block(a, 1), prod->block(b, 1));
  CHECK(prod->dist(a, b) == std::sqrt(d1 * d1 + d2 * d2));
  CHECK(prod->curvature_bounds().kmin == -1.0);
  CHECK(prod->curvature_bounds().kmax == 0.0);
  CHECK(prod->intrinsic_dim() == 5);
}

TEST_CASE("product power roundtrip and componentwise exp/log") {
  const ManifoldPtr s = make_manifold("spd:2");
  const auto prod = ProductManifold::power(s, 3);
  Rng rng(21);
  const Point x = prod->random_point(rng);
  const Point y = prod->random_point(rng);
  CHECK(prod->dist(prod->exp(x, prod->log(x, y)), y) <= 1e-8);
}

TEST_CASE("dlog adjoint matches finite differences of the log pairing") {
  for (const std::string spec : {"euclidean:3", "hyperbolic:3", "spd:2"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng(55);
    for (int trial = 0; trial < 6; ++trial) {
      const Point x = m->random_point(rng);
      const Point y = m->exp(x, rng.uniform(0.3, 1.5) * m->random_unit_tangent(x, rng));
      const TangentVector u = m->random_tangent(x, rng);
      const Vec grad = m->dlog_adjoint(x, y, u.coords);
      const TangentVector dir = m->random_unit_tangent(y, rng);
      const Scalar h = 1e-6;
      const Point yp = m->exp(y, h * dir);
      const Point ym2 = m->exp(y, -h * dir);
      const Scalar fd =
          (m->inner(u, m->log(x, yp)) - m->inner(u, m->log(x, ym2))) / (2 * h);
      CHECK(m->inner({y, grad}, dir) == doctest::Approx(fd).epsilon(5e-5));
    }
  }
}

TEST_CASE("unknown manifold specs are rejected") {
  CHECK_THROWS_AS(make_manifold("torus:3"), std::invalid_argument);
  CHECK_THROWS_AS(make_manifold("euclidean"), std::invalid_argument);
  CHECK_THROWS_AS(make_manifold("spd:0"), std::invalid_argument);
  CHECK_THROWS_AS(make_manifold("spd:x"), std::invalid_argument);
}
