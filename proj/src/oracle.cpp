#include "riopt/oracle.hpp"

#include <utility>
#include <vector>

namespace riopt {

ObjectiveOracle zero_oracle(ManifoldPtr m) {
  ObjectiveOracle o;
  o.value = [](const Point&) { return 0.0; };
  o.gradient = [](const Point& x) { return Vec::Zero(x.size()).eval(); };
  o.smoothness = 0;
  o.strong_convexity = 0;
  o.lipschitz = 0;
  (void)m;
  return o;
}

ObjectiveOracle squared_distance_oracle(ManifoldPtr m, Point target, Scalar weight,
                                        Scalar working_radius) {
  ObjectiveOracle o;
  o.value = [m, target, weight](const Point& x) {
    const Scalar d = m->dist(x, target);
    return 0.5 * weight * d * d;
  };
  o.gradient = [m, target, weight](const Point& x) {
    return (-weight * m->log(x, target).coords).eval();
  };
  o.smoothness = weight * zeta(working_radius, m->kappa_min());
  o.strong_convexity = weight;  // delta = 1 on Hadamard manifolds
  o.lipschitz = weight * working_radius;
  o.quad_form = QuadraticDistanceForm{std::move(target), weight};
  return o;
}

ObjectiveOracle sum_oracles(std::vector<ObjectiveOracle> terms) {
  if (terms.empty()) throw std::invalid_argument("sum_oracles: empty sum");
  auto shared = std::make_shared<std::vector<ObjectiveOracle>>(std::move(terms));
  ObjectiveOracle o;
  o.value = [shared](const Point& x) {
    Scalar acc = 0;
    for (const auto& t : *shared) acc += t.value(x);
    return acc;
  };
  o.gradient = [shared](const Point& x) {
    Vec g = (*shared)[0].gradient(x);
    for (std::size_t i = 1; i < shared->size(); ++i) g += (*shared)[i].gradient(x);
    return g;
  };
  for (const auto& t : *shared) {
    o.smoothness += t.smoothness;
    o.strong_convexity += t.strong_convexity;
  }
  return o;
}

ObjectiveOracle x_section(const SaddleOracle& f, Point y) {
  ObjectiveOracle o;
  o.value = [value = f.value, y](const Point& x) { return value(x, y); };
  o.gradient = [grad = f.grad_x, y](const Point& x) { return grad(x, y); };
  o.smoothness = f.smoothness;
  o.strong_convexity = f.strong_convexity;
  o.lipschitz = f.lipschitz;
  if (f.x_section_deficit) o.weak_convexity_deficit = f.x_section_deficit(y);
  return o;
}

ObjectiveOracle neg_y_section(const SaddleOracle& f, Point x) {
  ObjectiveOracle o;
  o.value = [value = f.value, x](const Point& y) { return -value(x, y); };
  o.gradient = [grad = f.grad_y, x](const Point& y) { return (-grad(x, y)).eval(); };
  o.smoothness = f.smoothness;
  o.strong_convexity = f.strong_convexity;
  o.lipschitz = f.lipschitz;
  if (f.y_section_deficit) o.weak_convexity_deficit = f.y_section_deficit(x);
  return o;
}

Scalar finite_diff_directional(const Manifold& m, const ObjectiveOracle& f, const Point& x,
                               const TangentVector& v, Scalar h) {
  if (!(h > 0)) throw std::domain_error("finite_diff_directional: step must be positive");
  return (f.value(m.exp(x, h * v)) - f.value(x)) / h;
}

Scalar central_diff_directional(const Manifold& m, const ObjectiveOracle& f, const Point& x,
                                const TangentVector& v, Scalar h) {
  if (!(h > 0)) throw std::domain_error("central_diff_directional: step must be positive");
  return (f.value(m.exp(x, h * v)) - f.value(m.exp(x, -h * v))) / (2 * h);
}

}  // namespace riopt
