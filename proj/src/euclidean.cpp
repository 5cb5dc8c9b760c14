#include "riopt/euclidean.hpp"

namespace riopt {

EuclideanSpace::EuclideanSpace(Eigen::Index dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("EuclideanSpace: dimension must be positive");
}

std::string EuclideanSpace::name() const { return "euclidean:" + std::to_string(dim_); }

Vec EuclideanSpace::dlog_adjoint(const Point&, const Point&, const Vec& u) const { return u; }

}  // namespace riopt
