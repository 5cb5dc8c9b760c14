#include <doctest.h>

#include <cmath>
#include <fstream>

#include "riopt/streams.hpp"

using namespace riopt;

namespace {

RiodConfig base_config(const ManifoldPtr& m, const std::shared_ptr<GeodesicBall>& ball,
                       Scalar smoothness, Scalar eta = 0.25) {
  RiodConfig cfg;
  cfg.eta = eta;
  cfg.set = ball;
  cfg.kappa_min = m->kappa_min();
  cfg.smoothness = smoothness;
  cfg.method = ProxMethod::prgd;
  cfg.x1 = ball->center();
  return cfg;
}

}  // namespace

TEST_CASE("precision formula: printed example and structural bounds") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(2), 0.5);  // D = 1
  RiodConfig cfg = base_config(m, ball, 0.0, 1.0);
  // t=1, eta=1, L=0, Lips=0, D=1, kmin=0 evaluates to max{4, 4*15}^-1 / 8
  CHECK(precision_riod(1, cfg, 0.0) == doctest::Approx(1.0 / 480.0).epsilon(1e-15));

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    RiodConfig c2 = cfg;
    c2.eta = rng.uniform(0.05, 2.0);
    c2.smoothness = rng.uniform(0, 5.0);
    c2.kappa_min = -rng.uniform(0, 2.0);
    const Scalar lips = rng.uniform(0, 4.0);
    const int t = 1 + static_cast<int>(rng.uniform(0, 30));
    const Scalar eps = precision_riod(t, c2, lips);
    CHECK(eps > 0.0);
    CHECK(eps <= 1.0 / (32.0 * c2.eta) * (1 + 1e-12));
    CHECK(precision_riod(t + 1, c2, lips) <= eps);
    CHECK(precision_riod(t, c2, lips + 0.5) <= eps);
  }

  // once the (t+1)^2 branch dominates, doubling t roughly quarters eps
  RiodConfig c3 = cfg;
  c3.smoothness = 1.0;
  const Scalar e10 = precision_riod(10, c3, 1.0);
  const Scalar e20 = precision_riod(20, c3, 1.0);
  CHECK(e10 / e20 == doctest::Approx(Scalar(21 * 21) / (11 * 11)).epsilon(1e-12));

  CHECK_THROWS_AS(precision_riod(0, cfg, 0.0), std::domain_error);
}

TEST_CASE("zero losses and hints keep every iterate at the start") {
  const ManifoldPtr m = make_manifold("hyperbolic:4");
  Rng rng(2);
  const Point c = m->random_point(rng);
  auto ball = std::make_shared<GeodesicBall>(m, c, 1.0);
  RiodConfig cfg = base_config(m, ball, 1.0);
  cfg.horizon = 6;

  LossStream zero_stream{[m](int) { return zero_oracle(m); }, 6};
  const RegretRecord record = riod_run(zero_stream, HintPolicy::zero(), cfg);
  for (int t = 0; t < 6; ++t) {
    CHECK(m->dist(record.played[t], c) <= 1e-12);
    CHECK(m->dist(record.secondary[t], c) <= 1e-12);
    CHECK(record.loss_values[t] == 0.0);
  }
  CHECK(regret(record, zero_stream, c, *ball) == 0.0);
}

TEST_CASE("perfect hints zero the optimism terms and regret obeys 3D^2/2eta") {
  const ManifoldPtr m = make_manifold("euclidean:3");
  Rng rng(4);
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(3), 1.0);
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, 40, 0.1, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = 40;

  const RegretRecord record =
      riod_run(synth.stream, HintPolicy::external_fn(synth.stream.at), cfg);
  // round 1 is forced to the zero hint; perfect hints silence all later rounds
  Scalar optim_tail = 0;
  for (std::size_t t = 1; t < record.optimism_terms.size(); ++t) {
    optim_tail += record.optimism_terms[t];
  }
  CHECK(optim_tail == doctest::Approx(0.0).epsilon(1e-20));

  std::vector<ObjectiveOracle> losses;
  for (int t = 1; t <= 40; ++t) losses.push_back(synth.stream.at(t));
  const Point u = prgd(*m, sum_oracles(std::move(losses)), *ball, cfg.x1,
                       StoppingRule::certificate(1e-10, 100000))
                      .first;
  const Scalar d = ball->diameter().value();
  CHECK(regret(record, synth.stream, u, *ball) <=
        3 * d * d / (2 * cfg.eta) + cfg.eta * record.optimism_terms[0] + 1e-6);
}

TEST_CASE("single-round regret is the pointwise loss difference") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(2), 1.0);
  Rng rng(5);
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, 1, 0.1, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = 1;
  const RegretRecord record = riod_run(synth.stream, HintPolicy::zero(), cfg);
  Vec u(2);
  u << 0.3, -0.2;
  CHECK(regret(record, synth.stream, u, *ball) ==
        doctest::Approx(record.loss_values[0] - synth.stream.at(1).value(u)));
  Vec outside(2);
  outside << 5, 5;
  CHECK_THROWS_AS(regret(record, synth.stream, outside, *ball), ContractError);
}

TEST_CASE("path length of drifting comparators on a circle") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(2), 1.0);
  Rng rng(6);
  const int horizon = 12;
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, horizon, 0.05, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = horizon;
  const RegretRecord record = riod_run(synth.stream, HintPolicy::zero(), cfg);

  // comparators walking a circle of radius r: every chord has equal length
  const Scalar r = 0.5;
  std::vector<Point> useq;
  for (int t = 0; t <= horizon; ++t) {
    const Scalar angle = 2 * M_PI * t / horizon;
    Vec u(2);
    u << r * std::cos(angle), r * std::sin(angle);
    useq.push_back(u);
  }
  const Scalar chord = (useq[1] - useq[0]).norm();
  const auto [dyn, path] = dynamic_regret(record, synth.stream, useq, *ball);
  CHECK(path == doctest::Approx(horizon * chord).epsilon(1e-12));

  // static comparators reduce the dynamic bound to the static bound
  const std::vector<Point> constant(horizon, useq[0]);
  CHECK(regret_bound(record, cfg, constant, 0.0) ==
        doctest::Approx(regret_bound(record, cfg)).epsilon(1e-12));
}

TEST_CASE("measured regret stays under the bound on drifting and sign-flip streams") {
  for (const std::string spec : {"euclidean:3", "hyperbolic:3"}) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng(7);
    Rng crng = rng.split("center");
    const Point c = m->random_point(crng);
    auto ball = std::make_shared<GeodesicBall>(m, c, 1.0);
    for (const bool flip : {false, true}) {
      const SyntheticStream synth = flip ? sign_flip_stream(m, ball, 60, rng)
                                         : drifting_quadratic_stream(m, ball, 60, 0.1, rng);
      RiodConfig cfg = base_config(m, ball, synth.smoothness);
      cfg.horizon = 60;
      const RegretRecord record = riod_run(synth.stream, HintPolicy::previous_loss(), cfg);

      std::vector<ObjectiveOracle> losses;
      for (int t = 1; t <= 60; ++t) losses.push_back(synth.stream.at(t));
      const Point u = prgd(*m, sum_oracles(std::move(losses)), *ball, c,
                           StoppingRule::certificate(1e-10, 100000))
                          .first;
      CHECK(regret(record, synth.stream, u, *ball) <= regret_bound(record, cfg) + 1e-6);
      for (int t = 0; t < 60; ++t) {
        CHECK(ball->contains(record.played[t], 1e-9));
        CHECK(ball->contains(record.secondary[t], 1e-9));
      }
    }
  }
}

TEST_CASE("optimism benefit: previous-loss hints beat zero hints on slow drift") {
  const ManifoldPtr m = make_manifold("euclidean:3");
  Rng rng(8);
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(3), 1.0);
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, 80, 0.02, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = 80;

  const RegretRecord with_hints = riod_run(synth.stream, HintPolicy::previous_loss(), cfg);
  const RegretRecord no_hints = riod_run(synth.stream, HintPolicy::zero(), cfg);

  Scalar optimistic = 0, raw = 0;
  for (int t = 0; t < 80; ++t) {
    optimistic += with_hints.optimism_terms[t];
    const Vec g = synth.stream.at(t + 1).gradient(no_hints.played[t]);
    raw += m->inner({no_hints.played[t], g}, {no_hints.played[t], g});
  }
  CHECK(optimistic <= raw);
}

TEST_CASE("secondary iterates are independent of the hint policy") {
  const ManifoldPtr m = make_manifold("hyperbolic:3");
  Rng rng(9);
  Rng crng = rng.split("center");
  const Point c = m->random_point(crng);
  auto ball = std::make_shared<GeodesicBall>(m, c, 1.0);
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, 25, 0.1, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = 25;

  const RegretRecord a = riod_run(synth.stream, HintPolicy::zero(), cfg);
  const RegretRecord b = riod_run(synth.stream, HintPolicy::previous_loss(), cfg);
  for (int t = 0; t < 25; ++t) {
    CHECK(m->dist(a.secondary[t], b.secondary[t]) == 0.0);
  }
  CHECK(m->dist(a.secondary_final, b.secondary_final) == 0.0);
}

TEST_CASE("euclidean prox reference: secondary trajectory tracks the exact prox map") {
  // fixed quadratic loss (1/2)|x - p|^2 with interior optima: the exact prox
  // is x_{t+1}* = (x_t + eta p) / (1 + eta)
  const ManifoldPtr m = make_manifold("euclidean:2");
  Vec p(2);
  p << 0.3, -0.1;
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(2), 1.0);
  LossStream stream{[m, p](int) { return squared_distance_oracle(m, p, 1.0, 4.0); }, 10};
  RiodConfig cfg = base_config(m, ball, 1.0);
  cfg.horizon = 10;
  cfg.method = ProxMethod::crgd;
  const RegretRecord record = riod_run(stream, HintPolicy::previous_loss(), cfg);

  Point exact = cfg.x1;
  for (int t = 0; t < 10; ++t) {
    exact = (exact + cfg.eta * p) / (1 + cfg.eta);
    const Point& approx = t + 1 < 10 ? record.secondary[t + 1] : record.secondary_final;
    const Scalar eps = record.eps_values[t];
    // certificate slack: (1/2eta) d^2 <= eps d(center,*)^2 with d(center,*) <= D
    const Scalar slack = std::sqrt(2 * cfg.eta * eps) * ball->diameter().value();
    CHECK(m->dist(approx, exact) <= slack + 1e-9);
  }
}

TEST_CASE("riod trace rows carry finite values and the configured horizon") {
  const ManifoldPtr m = make_manifold("euclidean:2");
  auto ball = std::make_shared<GeodesicBall>(m, Vec::Zero(2), 1.0);
  Rng rng(12);
  const SyntheticStream synth = drifting_quadratic_stream(m, ball, 15, 0.1, rng);
  RiodConfig cfg = base_config(m, ball, synth.smoothness);
  cfg.horizon = 15;
  const RegretRecord record = riod_run(synth.stream, HintPolicy::previous_loss(), cfg);

  const auto path = std::filesystem::temp_directory_path() / "riopt-riod-trace.csv";
  write_riod_trace(path, record, synth.stream, cfg.x1);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16);  // header + 15 rounds
}
