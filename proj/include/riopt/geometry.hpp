#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace riopt {

using Scalar = double;

/// Raised when an operation requires nonpositive sectional curvature and the
/// input geometry violates it.
class UnsupportedGeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

// x * coth(x), continuous at 0. Series below 1e-4 avoids the 0/0.
template <typename T>
T xcothx(T x) {
  if (x < T(1e-4)) {
    const T x2 = x * x;
    return T(1) + x2 / T(3) - x2 * x2 / T(45);
  }
  return x * std::cosh(x) / std::sinh(x);
}

}  // namespace detail

/// Curvature distortion constant zeta_r = r*sqrt(|kmin|)*coth(r*sqrt(|kmin|))
/// for kmin < 0, and 1 otherwise. Always >= 1.
template <typename T>
T zeta(T r, T kappa_min) {
  if (!(r >= T(0))) {
    throw std::domain_error("zeta: radius must be nonnegative, got " + std::to_string(double(r)));
  }
  if (kappa_min >= T(0)) return T(1);
  return detail::xcothx(r * std::sqrt(-kappa_min));
}

/// Lower distortion constant delta_r. This toolkit is restricted to Hadamard
/// manifolds (kmax <= 0), where delta_r = 1 identically.
template <typename T>
T delta(T r, T kappa_max) {
  if (!(r >= T(0))) {
    throw std::domain_error("delta: radius must be nonnegative, got " + std::to_string(double(r)));
  }
  if (kappa_max > T(0)) {
    throw UnsupportedGeometryError("delta: positive curvature upper bound " +
                                   std::to_string(double(kappa_max)) + " is not supported");
  }
  return T(1);
}

/// Sectional curvature range [kmin, kmax] of a manifold, kmin <= kmax <= 0.
struct CurvatureBounds {
  Scalar kmin = 0;
  Scalar kmax = 0;

  CurvatureBounds() = default;
  CurvatureBounds(Scalar kmin_, Scalar kmax_) : kmin(kmin_), kmax(kmax_) {
    if (kmax > 0) {
      throw UnsupportedGeometryError("CurvatureBounds: kmax must be <= 0 (Hadamard), got " +
                                     std::to_string(kmax));
    }
    if (kmin > kmax) {
      throw std::domain_error("CurvatureBounds: kmin > kmax");
    }
  }

  static CurvatureBounds merge(const CurvatureBounds& a, const CurvatureBounds& b) {
    return {std::min(a.kmin, b.kmin), std::max(a.kmax, b.kmax)};
  }
};

/// zeta/delta evaluated at a fixed radius.
struct GeometricConstants {
  Scalar zeta_r = 1;
  Scalar delta_r = 1;
  Scalar radius = 0;

  GeometricConstants() = default;
  GeometricConstants(Scalar r, const CurvatureBounds& cb)
      : zeta_r(zeta(r, cb.kmin)), delta_r(delta(r, cb.kmax)), radius(r) {}
};

}  // namespace riopt
