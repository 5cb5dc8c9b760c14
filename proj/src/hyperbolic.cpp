#include "riopt/hyperbolic.hpp"

#include <cmath>

namespace riopt {

namespace {

// sinh(t)/t, continuous at 0
Scalar sinhc(Scalar t) {
  if (t < 1e-8) return 1.0 + t * t / 6.0;
  return std::sinh(t) / t;
}

// t/sinh(t), continuous at 0
Scalar inv_sinhc(Scalar t) {
  if (t < 1e-8) return 1.0 - t * t / 6.0;
  return t / std::sinh(t);
}

// derivative of t/sinh(t)
Scalar inv_sinhc_prime(Scalar t) {
  if (t < 1e-4) return -t / 3.0 + 7.0 * t * t * t / 90.0;
  const Scalar s = std::sinh(t);
  return (s - t * std::cosh(t)) / (s * s);
}

}  // namespace

HyperbolicSpace::HyperbolicSpace(Eigen::Index dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("HyperbolicSpace: dimension must be positive");
}

std::string HyperbolicSpace::name() const { return "hyperbolic:" + std::to_string(dim_); }

Scalar HyperbolicSpace::minkowski(const Vec& a, const Vec& b) {
  return a.tail(a.size() - 1).dot(b.tail(b.size() - 1)) - a[0] * b[0];
}

Scalar HyperbolicSpace::membership_error_impl(const Point& x) const {
  if (x[0] <= 0) return 1.0 + std::abs(x[0]);
  return std::abs(minkowski(x, x) + 1.0);
}

Point HyperbolicSpace::project_to_manifold_impl(const Point& x) const {
  const Scalar q = -minkowski(x, x);
  if (!(q > 0) || x[0] <= 0) {
    throw std::domain_error("hyperboloid: point cannot be renormalized onto the sheet");
  }
  return x / std::sqrt(q);
}

Vec HyperbolicSpace::project_to_tangent_impl(const Point& x, const Vec& coords) const {
  return coords + minkowski(x, coords) * x;
}

Vec HyperbolicSpace::exp_impl(const Point& x, const Vec& v) const {
  const Scalar sq = minkowski(v, v);
  const Scalar t = std::sqrt(std::max<Scalar>(0, sq));
  if (t == 0) return x;
  return std::cosh(t) * x + sinhc(t) * v;
}

Scalar HyperbolicSpace::dist_impl(const Point& x, const Point& y) const {
  // <x-y, x-y>_M = 4 sinh^2(d/2); the difference form avoids the cancellation
  // that makes acosh(-<x,y>_M) lose half the precision near coincident points
  const Vec u = x - y;
  const Scalar q = std::max<Scalar>(0, minkowski(u, u));
  return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

Vec HyperbolicSpace::log_impl(const Point& x, const Point& y) const {
  const Scalar d = dist_impl(x, y);
  if (d < 1e-12) return Vec::Zero(x.size());
  const Scalar b = std::cosh(d);
  // u = y - b x written as (y - x) - (b - 1) x to keep small differences exact
  const Vec u = (y - x) - (b - 1.0) * x;
  const Scalar s = std::sqrt(std::max<Scalar>(0, minkowski(u, u)));
  if (s < 1e-300) return Vec::Zero(x.size());
  return (d / s) * u;
}

Vec HyperbolicSpace::transport_impl(const Point& x, const Point& y, const Vec& v) const {
  const Scalar denom = 1.0 - minkowski(x, y);  // = 1 + cosh(dist) >= 2
  return v + (minkowski(y, v) / denom) * (x + y);
}

Point HyperbolicSpace::random_point_impl(Rng& rng) const {
  // exp of a random tangent at the apex; the radius is drawn dimension-free
  // so coordinates stay within the numerically safe range of the sheet
  Vec apex = Vec::Zero(dim_ + 1);
  apex[0] = 1;
  Vec dir = rng.gaussian_vector(dim_);
  const Scalar n = dir.norm();
  if (n > 0) dir /= n;
  Vec v = Vec::Zero(dim_ + 1);
  v.tail(dim_) = std::abs(rng.gaussian()) * dir;
  return exp_impl(apex, v);
}

Vec HyperbolicSpace::random_tangent_impl(const Point& x, Rng& rng) const {
  return project_to_tangent_impl(x, rng.gaussian_vector(dim_ + 1));
}

Vec HyperbolicSpace::dlog_adjoint(const Point& x, const Point& y, const Vec& u) const {
  // <u, log_x(y)> = theta(d) * <u, y>_M with theta = d/sinh(d); differentiate
  // through both the distance and the linear form.
  const Scalar d = dist_impl(x, y);
  const Vec pu = project_to_tangent_impl(y, u);
  if (d < 1e-12) return pu;
  const Scalar uy = minkowski(u, y);
  const Vec log_yx = log_impl(y, x);
  return inv_sinhc(d) * pu + inv_sinhc_prime(d) * uy * (-1.0 / d) * log_yx;
}

}  // namespace riopt
