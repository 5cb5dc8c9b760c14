#include "riopt/product.hpp"

namespace riopt {

ProductManifold::ProductManifold(std::vector<ManifoldPtr> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("ProductManifold: no components");
  offsets_.reserve(components_.size());
  for (const auto& c : components_) {
    offsets_.push_back(total_dim_);
    total_dim_ += c->ambient_dim();
    bounds_ = CurvatureBounds::merge(bounds_, c->curvature_bounds());
  }
}

ProductManifold::ProductManifold(ManifoldPtr first, ManifoldPtr second)
    : ProductManifold(std::vector<ManifoldPtr>{std::move(first), std::move(second)}) {}

std::shared_ptr<const ProductManifold> ProductManifold::power(ManifoldPtr factor, int n) {
  if (n < 1) throw std::invalid_argument("ProductManifold::power: n must be >= 1");
  std::vector<ManifoldPtr> comps(static_cast<std::size_t>(n), factor);
  return std::make_shared<const ProductManifold>(std::move(comps));
}

std::string ProductManifold::name() const {
  std::string out = "product(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ",";
    out += components_[i]->name();
  }
  return out + ")";
}

Eigen::Index ProductManifold::intrinsic_dim() const {
  Eigen::Index d = 0;
  for (const auto& c : components_) d += c->intrinsic_dim();
  return d;
}

Vec ProductManifold::block(const Vec& x, std::size_t i) const {
  return x.segment(offsets_[i], components_[i]->ambient_dim());
}

Vec ProductManifold::concat(const std::vector<Vec>& blocks) const {
  Vec out(total_dim_);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.segment(offsets_[i], components_[i]->ambient_dim()) = blocks[i];
  }
  return out;
}

template <typename Fn>
static Vec map_blocks(const ProductManifold& p, Eigen::Index total, Fn&& fn) {
  Vec out(total);
  for (std::size_t i = 0; i < p.component_count(); ++i) {
    out.segment(p.offset(i), p.component(i)->ambient_dim()) = fn(i, *p.component(i));
  }
  return out;
}

Vec ProductManifold::exp_impl(const Point& x, const Vec& v) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.exp(block(x, i), {block(x, i), block(v, i)});
  });
}

Vec ProductManifold::log_impl(const Point& x, const Point& y) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.log(block(x, i), block(y, i)).coords;
  });
}

Scalar ProductManifold::dist_impl(const Point& x, const Point& y) const {
  Scalar acc = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Scalar d = components_[i]->dist(block(x, i), block(y, i));
    acc += d * d;
  }
  return std::sqrt(acc);
}

Vec ProductManifold::transport_impl(const Point& x, const Point& y, const Vec& v) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.transport(block(y, i), {block(x, i), block(v, i)}).coords;
  });
}

Scalar ProductManifold::inner_impl(const Point& x, const Vec& u, const Vec& v) const {
  Scalar acc = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    acc += components_[i]->inner({block(x, i), block(u, i)}, {block(x, i), block(v, i)});
  }
  return acc;
}

Scalar ProductManifold::membership_error_impl(const Point& x) const {
  Scalar worst = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    worst = std::max(worst, components_[i]->membership_error(block(x, i)));
  }
  return worst;
}

Point ProductManifold::project_to_manifold_impl(const Point& x) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.project_to_manifold(block(x, i));
  });
}

Vec ProductManifold::project_to_tangent_impl(const Point& x, const Vec& coords) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.project_to_tangent(block(x, i), block(coords, i));
  });
}

Point ProductManifold::random_point_impl(Rng& rng) const {
  return map_blocks(*this, total_dim_,
                    [&](std::size_t, const Manifold& m) { return m.random_point(rng); });
}

Vec ProductManifold::random_tangent_impl(const Point& x, Rng& rng) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.random_tangent(block(x, i), rng).coords;
  });
}

Vec ProductManifold::dlog_adjoint(const Point& x, const Point& y, const Vec& u) const {
  return map_blocks(*this, total_dim_, [&](std::size_t i, const Manifold& m) {
    return m.dlog_adjoint(block(x, i), block(y, i), block(u, i));
  });
}

}  // namespace riopt
