#pragma once

#include "riopt/riod.hpp"
#include "riopt/rng.hpp"

namespace riopt {

/// Synthetic losses for online experiments; targets are precomputed so a
/// stream is pure and replayable.
struct SyntheticStream {
  LossStream stream;
  std::vector<Point> targets;
  Scalar smoothness = 0;
};

/// Quadratic-distance losses (1/2) d(., p_t)^2 with targets performing a
/// random geodesic walk inside the ball.
SyntheticStream drifting_quadratic_stream(ManifoldPtr m,
                                          std::shared_ptr<const GeodesicBall> domain, int horizon,
                                          Scalar drift_step, const Rng& rng);

/// Adversarial flip between two fixed targets on opposite sides of the ball.
SyntheticStream sign_flip_stream(ManifoldPtr m, std::shared_ptr<const GeodesicBall> domain,
                                 int horizon, const Rng& rng);

}  // namespace riopt
