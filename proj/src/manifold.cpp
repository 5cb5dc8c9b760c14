#include "riopt/manifold.hpp"

#include "riopt/euclidean.hpp"
#include "riopt/hyperbolic.hpp"
#include "riopt/spd.hpp"

namespace riopt {

void Manifold::check_base(const Point& x, const TangentVector& v, const char* op) const {
  if (v.base.size() != x.size()) {
    throw ContractError(std::string(op) + ": tangent base dimension mismatch");
  }
  const Scalar scale = 1.0 + x.norm();
  if ((v.base - x).norm() > 1e-9 * scale) {
    throw ContractError(std::string(op) + ": tangent vector is based at a different point");
  }
}

Point Manifold::repair(Point x) const {
  if (membership_error_impl(x) > kDriftThreshold) {
    x = project_to_manifold_impl(x);
  }
  return x;
}

Point Manifold::exp(const Point& x, const TangentVector& v) const {
  check_base(x, v, "exp");
  return repair(exp_impl(x, v.coords));
}

TangentVector Manifold::log(const Point& x, const Point& y) const {
  return {x, log_impl(x, y)};
}

Scalar Manifold::dist(const Point& x, const Point& y) const { return dist_impl(x, y); }

Scalar Manifold::dist_impl(const Point& x, const Point& y) const {
  const Vec v = log_impl(x, y);
  return std::sqrt(std::max<Scalar>(0, inner_impl(x, v, v)));
}

TangentVector Manifold::transport(const Point& y, const TangentVector& v) const {
  Vec moved = transport_impl(v.base, y, v.coords);
  const Vec repaired = project_to_tangent_impl(y, moved);
  if ((repaired - moved).norm() > kDriftThreshold * (1.0 + moved.norm())) {
    moved = repaired;
  }
  return {y, std::move(moved)};
}

Scalar Manifold::inner(const TangentVector& u, const TangentVector& v) const {
  check_base(u.base, v, "inner");
  return inner_impl(u.base, u.coords, v.coords);
}

Scalar Manifold::norm(const TangentVector& v) const {
  return std::sqrt(std::max<Scalar>(0, inner_impl(v.base, v.coords, v.coords)));
}

Point Manifold::geodesic_point(const Point& x, const Point& y, Scalar t) const {
  if (!(t >= 0 && t <= 1)) {
    throw std::domain_error("geodesic_point: t must lie in [0, 1], got " + std::to_string(t));
  }
  if (t == 0) return x;
  if (t == 1) return y;
  return repair(exp_impl(x, t * log_impl(x, y)));
}

TangentVector Manifold::make_tangent(const Point& x, const Vec& coords) const {
  return {x, project_to_tangent_impl(x, coords)};
}

TangentVector Manifold::zero_tangent(const Point& x) const {
  return {x, Vec::Zero(x.size())};
}

Scalar Manifold::tangency_error(const Point& x, const Vec& coords) const {
  return (coords - project_to_tangent_impl(x, coords)).norm();
}

Point Manifold::random_point(Rng& rng) const { return repair(random_point_impl(rng)); }

TangentVector Manifold::random_tangent(const Point& x, Rng& rng) const {
  return {x, random_tangent_impl(x, rng)};
}

TangentVector Manifold::random_unit_tangent(const Point& x, Rng& rng) const {
  Vec v = random_tangent_impl(x, rng);
  Scalar n = std::sqrt(std::max<Scalar>(0, inner_impl(x, v, v)));
  while (n < 1e-12) {
    v = random_tangent_impl(x, rng);
    n = std::sqrt(std::max<Scalar>(0, inner_impl(x, v, v)));
  }
  return {x, v / n};
}

ManifoldPtr make_manifold(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("manifold spec must be kind:dim, got '" + spec + "'");
  }
  const std::string kind = spec.substr(0, colon);
  int dim = 0;
  try {
    dim = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("manifold spec has non-numeric dimension: '" + spec + "'");
  }
  if (dim <= 0) throw std::invalid_argument("manifold dimension must be positive");
  if (kind == "euclidean") return std::make_shared<EuclideanSpace>(dim);
  if (kind == "hyperbolic") return std::make_shared<HyperbolicSpace>(dim);
  if (kind == "spd") return std::make_shared<SpdManifold>(dim);
  throw std::invalid_argument("unknown manifold kind '" + kind + "'");
}

}  // namespace riopt
