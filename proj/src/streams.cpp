#include "riopt/streams.hpp"

namespace riopt {

namespace {

SyntheticStream from_targets(ManifoldPtr m, std::vector<Point> targets, Scalar working_radius) {
  auto shared = std::make_shared<std::vector<Point>>(std::move(targets));
  SyntheticStream out;
  out.smoothness = zeta(working_radius, m->kappa_min());
  out.stream.horizon = static_cast<int>(shared->size());
  out.stream.at = [m, shared, working_radius](int t) {
    return squared_distance_oracle(m, shared->at(t - 1), 1.0, working_radius);
  };
  out.targets = *shared;
  return out;
}

}  // namespace

SyntheticStream drifting_quadratic_stream(ManifoldPtr m,
                                          std::shared_ptr<const GeodesicBall> domain, int horizon,
                                          Scalar drift_step, const Rng& rng) {
  Rng stream_rng = rng.split("drifting-quadratic");
  std::vector<Point> targets;
  targets.reserve(horizon);
  Point p = domain->project(m->random_point(stream_rng));
  for (int t = 0; t < horizon; ++t) {
    targets.push_back(p);
    const TangentVector dir = m->random_unit_tangent(p, stream_rng);
    p = domain->project(m->exp(p, drift_step * dir));
  }
  return from_targets(std::move(m), std::move(targets), 2.0 * domain->radius());
}

SyntheticStream sign_flip_stream(ManifoldPtr m, std::shared_ptr<const GeodesicBall> domain,
                                 int horizon, const Rng& rng) {
  Rng stream_rng = rng.split("sign-flip");
  const Point c = domain->center();
  const TangentVector dir = m->random_unit_tangent(c, stream_rng);
  const Scalar r = 0.9 * domain->radius();
  const Point a = m->exp(c, r * dir);
  const Point b = m->exp(c, -r * dir);
  std::vector<Point> targets;
  targets.reserve(horizon);
  for (int t = 0; t < horizon; ++t) targets.push_back(t % 2 == 0 ? a : b);
  return from_targets(std::move(m), std::move(targets), 2.0 * domain->radius());
}

}  // namespace riopt
