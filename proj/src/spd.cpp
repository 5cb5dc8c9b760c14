#include "riopt/spd.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace riopt {

namespace {

constexpr Scalar kEigFloor = 1e-14;

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

Mat apply_spectral(const SymEig& eig, Scalar (*fn)(Scalar)) {
  Vec f(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = fn(eig.eigenvalues[i]);
  return eig.eigenvectors * f.asDiagonal() * eig.eigenvectors.transpose();
}

void require_pd(const SymEig& eig, const char* op) {
  const Scalar lmin = eig.eigenvalues.minCoeff();
  if (lmin <= 0) {
    throw std::domain_error(std::string(op) + ": matrix is not positive definite, smallest eigenvalue " +
                            std::to_string(lmin));
  }
}

Scalar floored_log(Scalar l) { return std::log(std::max(l, kEigFloor)); }
Scalar floored_sqrt(Scalar l) { return std::sqrt(std::max(l, kEigFloor)); }
Scalar floored_inv_sqrt(Scalar l) { return 1.0 / std::sqrt(std::max(l, kEigFloor)); }

}  // namespace

SymEig spd_sym_eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrize(a));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spd_sym_eig: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat spd_expm(const Mat& a) {
  return apply_spectral(spd_sym_eig(a), +[](Scalar l) { return std::exp(l); });
}

Mat spd_logm(const Mat& a) {
  const SymEig eig = spd_sym_eig(a);
  require_pd(eig, "spd_logm");
  return apply_spectral(eig, floored_log);
}

Mat spd_sqrtm(const Mat& a) {
  const SymEig eig = spd_sym_eig(a);
  require_pd(eig, "spd_sqrtm");
  return apply_spectral(eig, floored_sqrt);
}

SpdManifold::SpdManifold(Eigen::Index d) : d_(d) {
  if (d <= 0) throw std::invalid_argument("SpdManifold: matrix dimension must be positive");
}

std::string SpdManifold::name() const { return "spd:" + std::to_string(d_); }

Mat SpdManifold::to_matrix(const Vec& x) const {
  return Eigen::Map<const Mat>(x.data(), d_, d_);
}

Vec SpdManifold::to_vec(const Mat& m) const {
  return Eigen::Map<const Vec>(m.data(), d_ * d_);
}

Scalar SpdManifold::membership_error_impl(const Point& x) const {
  const Mat m = to_matrix(x);
  const Scalar asym = (m - m.transpose()).norm();
  const Scalar lmin = spd_sym_eig(m).eigenvalues.minCoeff();
  return std::max(asym, lmin > 0 ? Scalar(0) : Scalar(1) - lmin);
}

Point SpdManifold::project_to_manifold_impl(const Point& x) const {
  return to_vec(symmetrize(to_matrix(x)));
}

Vec SpdManifold::project_to_tangent_impl(const Point&, const Vec& coords) const {
  return to_vec(symmetrize(to_matrix(coords)));
}

Scalar SpdManifold::inner_impl(const Point& x, const Vec& u, const Vec& v) const {
  const Mat xm = to_matrix(x);
  const auto llt = xm.llt();
  const Mat a = llt.solve(to_matrix(u));
  const Mat b = llt.solve(to_matrix(v));
  return (a * b).trace();
}

Vec SpdManifold::exp_impl(const Point& x, const Vec& v) const {
  const SymEig ex = spd_sym_eig(to_matrix(x));
  require_pd(ex, "spd exp");
  const Mat s = apply_spectral(ex, floored_inv_sqrt);
  const Mat r = apply_spectral(ex, floored_sqrt);
  const Mat inner = symmetrize(s * to_matrix(v) * s);
  return to_vec(symmetrize(r * spd_expm(inner) * r));
}

Vec SpdManifold::log_impl(const Point& x, const Point& y) const {
  const SymEig ex = spd_sym_eig(to_matrix(x));
  require_pd(ex, "spd log");
  const Mat s = apply_spectral(ex, floored_inv_sqrt);
  const Mat r = apply_spectral(ex, floored_sqrt);
  const Mat inner = symmetrize(s * to_matrix(y) * s);
  const SymEig ei = spd_sym_eig(inner);
  require_pd(ei, "spd log");
  if ((ei.eigenvalues.array().log().abs() < 1e-12).all()) {
    return Vec::Zero(x.size());
  }
  return to_vec(symmetrize(r * apply_spectral(ei, floored_log) * r));
}

Scalar SpdManifold::dist_impl(const Point& x, const Point& y) const {
  const SymEig ex = spd_sym_eig(to_matrix(x));
  require_pd(ex, "spd dist");
  const Mat s = apply_spectral(ex, floored_inv_sqrt);
  const Mat inner = symmetrize(s * to_matrix(y) * s);
  const SymEig ei = spd_sym_eig(inner);
  require_pd(ei, "spd dist");
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < ei.eigenvalues.size(); ++i) {
    const Scalar l = std::log(ei.eigenvalues[i]);
    acc += l * l;
  }
  return std::sqrt(acc);
}

Vec SpdManifold::transport_impl(const Point& x, const Point& y, const Vec& v) const {
  // E = (Y X^-1)^{1/2} computed as X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{-1/2}
  const SymEig ex = spd_sym_eig(to_matrix(x));
  require_pd(ex, "spd transport");
  const Mat s = apply_spectral(ex, floored_inv_sqrt);
  const Mat r = apply_spectral(ex, floored_sqrt);
  const Mat mid = spd_sqrtm(symmetrize(s * to_matrix(y) * s));
  const Mat e = r * mid * s;
  return to_vec(symmetrize(e * to_matrix(v) * e.transpose()));
}

Point SpdManifold::random_point_impl(Rng& rng) const {
  Mat g(d_, d_);
  for (Eigen::Index j = 0; j < d_; ++j)
    for (Eigen::Index i = 0; i < d_; ++i) g(i, j) = rng.gaussian();
  Mat sym = symmetrize(g);
  const Scalar spectral = spd_sym_eig(sym).eigenvalues.cwiseAbs().maxCoeff();
  if (spectral > 1.0) sym /= spectral;
  return to_vec(spd_expm(sym));
}

Vec SpdManifold::random_tangent_impl(const Point&, Rng& rng) const {
  Mat g(d_, d_);
  for (Eigen::Index j = 0; j < d_; ++j)
    for (Eigen::Index i = 0; i < d_; ++i) g(i, j) = rng.gaussian();
  return to_vec(symmetrize(g));
}

Vec SpdManifold::dlog_adjoint(const Point& x, const Point& y, const Vec& u) const {
  // h(Y) = <U, log_X(Y)>_X. With S = X^{-1/2}, M = S Y S and the
  // Daleckii-Krein derivative of logm, grad h(Y) = Y * S dlogm(M)[S U S] S * Y.
  const SymEig ex = spd_sym_eig(to_matrix(x));
  require_pd(ex, "spd dlog_adjoint");
  const Mat s = apply_spectral(ex, floored_inv_sqrt);
  const Mat m = symmetrize(s * to_matrix(y) * s);
  const SymEig em = spd_sym_eig(m);
  require_pd(em, "spd dlog_adjoint");
  const Mat ut = symmetrize(s * to_matrix(u) * s);
  const Mat w = em.eigenvectors.transpose() * ut * em.eigenvectors;
  const Vec& lam = em.eigenvalues;
  Mat k(d_, d_);
  for (Eigen::Index i = 0; i < d_; ++i) {
    for (Eigen::Index j = 0; j < d_; ++j) {
      const Scalar li = std::max(lam[i], kEigFloor), lj = std::max(lam[j], kEigFloor);
      if (std::abs(li - lj) < 1e-12 * std::max(li, lj)) {
        k(i, j) = 1.0 / li;
      } else {
        k(i, j) = (std::log(li) - std::log(lj)) / (li - lj);
      }
    }
  }
  const Mat dlog = em.eigenvectors * k.cwiseProduct(w) * em.eigenvectors.transpose();
  const Mat ym = to_matrix(y);
  return to_vec(symmetrize(ym * s * dlog * s * ym));
}

}  // namespace riopt
