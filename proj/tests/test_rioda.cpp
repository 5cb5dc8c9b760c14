#include <doctest.h>

#include <cmath>
#include <fstream>

#include "riopt/saddles.hpp"

using namespace riopt;

TEST_CASE("eta is exactly a quarter of the inverse smoothness") {
  CHECK(eta_from_smoothness(2.0) == 0.125);
  CHECK(eta_from_smoothness(1.0) == 0.25);
  CHECK(eta_from_smoothness(3.0) * 3.0 == doctest::Approx(0.25).epsilon(1e-16));
  CHECK_THROWS_AS(eta_from_smoothness(0.0), std::domain_error);
}

TEST_CASE("rioda precision schedules: printed cases and caps") {
  // flat unconstrained mu=0 at t=1: (L/8) min{1, 1/(8*37)} = L/2368
  const Scalar l = 3.0;
  CHECK(precision_rioda(MinMaxCase::unconstrained_cvx, 1, l, 0, 0, 0.0, 0, 0, false) ==
        doctest::Approx(l / 2368.0).epsilon(1e-15));

  Rng rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    const Scalar smooth = rng.uniform(0.5, 4.0);
    const Scalar r = rng.uniform(0, 3.0);
    const Scalar k = -rng.uniform(0, 1.0);
    const int t = 1 + static_cast<int>(rng.uniform(0, 20));
    const Scalar e1 = precision_rioda(MinMaxCase::unconstrained_cvx, t, smooth, 0, 0, k, 0, r, false);
    CHECK(e1 > 0);
    CHECK(e1 <= smooth / 8 + 1e-15);
    const Scalar e2 =
        precision_rioda(MinMaxCase::unconstrained_scsc, t, smooth, 0.3, 0, k, 0, r, false);
    const Scalar e3 =
        precision_rioda(MinMaxCase::unconstrained_scsc, t + 5, smooth, 0.3, 0, k, 0, r, false);
    CHECK(e2 == e3);  // the mu>0 unconstrained schedule has no round dependence
  }

  // constrained schedules embed the target accuracy and a Lipschitz bound
  const Scalar c1 = precision_rioda(MinMaxCase::constrained_cvx, 1, 1.0, 0, 2.0, -1.0, 0.1, 0, false);
  const Scalar expect = 1.0 / (4.0 * (40.0 + 4.0 * (0.1 / 6.0 + 12.0)));
  CHECK(c1 == doctest::Approx(std::min(0.125, expect)).epsilon(1e-12));
  CHECK_THROWS_AS(precision_rioda(MinMaxCase::constrained_cvx, 1, 1.0, 0, 2.0, -1.0, 0.0, 0, false),
                  std::domain_error);
  CHECK_THROWS_AS(precision_rioda(MinMaxCase::constrained_scsc, 1, 1.0, 0, 2.0, -1.0, 0.1, 0, false),
                  std::domain_error);
}

TEST_CASE("guaranteed iteration counts evaluate as printed") {
  CHECK(rioda_iteration_count(MinMaxCase::constrained_cvx, 1.0, 0, 1.0, 0.1) == 80);
  // 34 ln(4000) = 281.9977 -> 282
  CHECK(rioda_iteration_count(MinMaxCase::constrained_scsc, 1.0, 0.5, 1.0, 1e-3) == 282);
  CHECK(rioda_iteration_count(MinMaxCase::unconstrained_cvx, 1.0, 0, 1.0, 0.1) == 60);
}

TEST_CASE("geodesic average fold reproduces running means") {
  const ManifoldPtr e = make_manifold("euclidean:1");
  AveragingState avg{Vec::Zero(1), Vec::Zero(1), 1};
  Vec two(1);
  two << 2;
  avg = geodesic_average_fold(*e, *e, avg, two, two, 1);
  CHECK(avg.xbar[0] == doctest::Approx(1.0));
  CHECK(avg.count == 2);
  CHECK_THROWS_AS(geodesic_average_fold(*e, *e, avg, two, two, 5), std::invalid_argument);

  // folding the same point repeatedly stays put
  const ManifoldPtr h = make_manifold("hyperbolic:3");
  Rng rng(3);
  const Point p = h->random_point(rng);
  AveragingState havg{p, p, 1};
  for (int t = 1; t <= 5; ++t) havg = geodesic_average_fold(*h, *h, havg, p, p, t);
  CHECK(h->dist(havg.xbar, p) <= 1e-12);

  // average of {p, p} then q moves a third of the way toward q
  const Point q = h->exp(p, 1.2 * h->random_unit_tangent(p, rng));
  AveragingState pq{p, p, 1};
  pq = geodesic_average_fold(*h, *h, pq, p, p, 1);
  pq = geodesic_average_fold(*h, *h, pq, q, q, 2);
  CHECK(h->dist(pq.xbar, h->geodesic_point(p, q, 1.0 / 3.0)) <= 1e-10);
}

TEST_CASE("euclidean geodesic averaging equals the arithmetic mean of plays") {
  const TestSaddle saddle = euclidean_separable_quadratic_saddle(3, 0.5, 1.5, 2.0, Rng(4));
  MinMaxConfig cfg = config_for(saddle);
  cfg.rounds = 12;
  cfg.method = ProxMethod::crgd;
  cfg.gap_cadence = 0;
  cfg.mu = 0;  // force averaging output
  cfg.schedule_eps = 0.1;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  Vec mean = Vec::Zero(3);
  for (const RiodaRound& r : res.trace.rounds) mean += r.x_played;
  mean /= static_cast<Scalar>(res.trace.rounds.size());
  CHECK((res.x_out - mean).norm() <= 1e-12);
}

TEST_CASE("zero bifunction keeps the initial pair") {
  const ManifoldPtr m = make_manifold("hyperbolic:3");
  Rng rng(5);
  const Point x1 = m->random_point(rng);
  const Point y1 = m->random_point(rng);
  SaddleOracle zero;
  zero.value = [](const Point&, const Point&) { return 0.0; };
  zero.grad_x = [](const Point& x, const Point&) { return Vec::Zero(x.size()).eval(); };
  zero.grad_y = [](const Point&, const Point& y) { return Vec::Zero(y.size()).eval(); };
  zero.smoothness = 1.0;

  MinMaxConfig cfg;
  cfg.manifold_x = m;
  cfg.manifold_y = m;
  cfg.set_x = std::make_shared<GeodesicBall>(m, x1, 1.0);
  cfg.set_y = std::make_shared<GeodesicBall>(m, y1, 1.0);
  cfg.smoothness = 1.0;
  cfg.kappa_min = -1;
  cfg.rounds = 4;
  cfg.gap_cadence = 0;
  cfg.schedule_eps = 0.01;
  cfg.x1 = x1;
  cfg.y1 = y1;
  const RiodaResult res = rioda_run(zero, cfg);
  CHECK(m->dist(res.x_out, x1) <= 1e-12);
  CHECK(m->dist(res.y_out, y1) <= 1e-12);
}

TEST_CASE("one round of the coupled quadratic moves strictly toward the saddle") {
  const TestSaddle saddle = euclidean_quadratic_saddle(3, 1.0, 1.5, 4.0, Rng(6));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.schedule_eps = 1e-3;
  IterateState state{saddle.x1, saddle.y1, saddle.x1, saddle.y1};
  const Scalar before = (state.x - saddle.xstar).norm() + (state.y - saddle.ystar).norm();
  const IterateState next = rioda_round(state, saddle.oracle, cfg, 1, nullptr);
  const Scalar after = (next.x - saddle.xstar).norm() + (next.y - saddle.ystar).norm();
  CHECK(after < before);
}

TEST_CASE("block solves are independent of scheduling order") {
  const TestSaddle saddle = euclidean_quadratic_saddle(3, 1.0, 1.5, 4.0, Rng(7));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.schedule_eps = 1e-3;
  MinMaxConfig sequential = cfg;
  sequential.parallel_blocks = false;

  IterateState state{saddle.x1, saddle.y1, saddle.x1, saddle.y1};
  const IterateState a = rioda_round(state, saddle.oracle, cfg, 1, nullptr);
  const IterateState b = rioda_round(state, saddle.oracle, sequential, 1, nullptr);
  CHECK((a.x - b.x).norm() == 0.0);
  CHECK((a.y - b.y).norm() == 0.0);
  CHECK((a.x_played - b.x_played).norm() == 0.0);
  CHECK((a.y_played - b.y_played).norm() == 0.0);
}

TEST_CASE("duality gap vanishes at an exact saddle and matches closed forms") {
  const TestSaddle saddle = euclidean_quadratic_saddle(3, 1.0, 1.0, 6.0, Rng(8));
  const GapResult at_saddle = duality_gap(saddle.oracle, *saddle.set_x, *saddle.set_y,
                                          saddle.xstar, saddle.ystar, 1e-9);
  CHECK(std::abs(at_saddle.gap) <= at_saddle.slack + 1e-9);

  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Point x = saddle.xstar + 0.5 * rng.gaussian_vector(3);
    const Point y = saddle.ystar + 0.5 * rng.gaussian_vector(3);
    const GapResult g = duality_gap(saddle.oracle, *saddle.set_x, *saddle.set_y, x, y, 1e-9);
    CHECK(g.gap == doctest::Approx(saddle.exact_gap(x, y)).epsilon(1e-6));
    CHECK(g.gap >= -2 * g.slack);
  }
}

TEST_CASE("gap is monotone along scsc traces within certificate slack") {
  const TestSaddle saddle = euclidean_separable_quadratic_saddle(3, 0.5, 1.0, 2.0, Rng(10));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.rounds = 60;
  cfg.gap_cadence = 5;
  cfg.gap_inner_tol = 1e-11;
  cfg.schedule_eps = 1e-6;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  std::vector<Scalar> gaps, slacks;
  for (const RiodaRound& r : res.trace.rounds) {
    if (r.duality_gap) {
      gaps.push_back(*r.duality_gap);
      slacks.push_back(*r.gap_slack);
    }
  }
  REQUIRE(gaps.size() >= 5);
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    CHECK(gaps[i + 1] <= gaps[i] + slacks[i] + slacks[i + 1] + 1e-12);
  }
}

TEST_CASE("gap convexity bound of the averages holds at sampled comparators") {
  const TestSaddle saddle = euclidean_bilinear_saddle(3, 1.5, Rng(11));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::prgd;
  cfg.rounds = 20;
  cfg.gap_cadence = 0;
  cfg.schedule_eps = 0.05;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);

  Rng rng(12);
  for (int probe = 0; probe < 10; ++probe) {
    const Point u = saddle.set_x->project(2.0 * rng.gaussian_vector(3));
    const Point v = saddle.set_y->project(2.0 * rng.gaussian_vector(3));
    Scalar avg_gap = 0;
    for (const RiodaRound& r : res.trace.rounds) {
      avg_gap += saddle.oracle.value(r.x_played, v) - saddle.oracle.value(u, r.y_played);
    }
    avg_gap /= static_cast<Scalar>(res.trace.rounds.size());
    const Scalar folded =
        saddle.oracle.value(res.x_out, v) - saddle.oracle.value(u, res.y_out);
    CHECK(folded <= avg_gap + 1e-9);
  }
}

TEST_CASE("epsilon-targeted mode derives the round count from the guarantee") {
  const TestSaddle saddle = euclidean_separable_quadratic_saddle(2, 0.5, 1.0, 2.0, Rng(13));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.gap_cadence = 0;
  cfg.eps_target = 1e-3;
  const int expected = rioda_iteration_count(MinMaxCase::constrained_scsc, cfg.smoothness,
                                             cfg.mu, saddle.initial_distance, 1e-3);
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  CHECK(static_cast<int>(res.trace.rounds.size()) == expected);
  CHECK(saddle.exact_gap(res.x_out, res.y_out) <= 1e-3);
}

TEST_CASE("constrained runs keep all four iterates feasible every round") {
  const ManifoldPtr m = make_manifold("hyperbolic:4");
  const TestSaddle saddle = separable_distance_saddle(m, 0.9, true, 1.0, Rng(16));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::prgd;
  cfg.rounds = 20;
  cfg.gap_cadence = 0;
  cfg.schedule_eps = 0.01;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  for (const RiodaRound& r : res.trace.rounds) {
    CHECK(saddle.set_x->contains(r.x, 1e-9));
    CHECK(saddle.set_y->contains(r.y, 1e-9));
    CHECK(saddle.set_x->contains(r.x_played, 1e-9));
    CHECK(saddle.set_y->contains(r.y_played, 1e-9));
  }
}

TEST_CASE("radius audit flags nothing on bounded runs and counts violations otherwise") {
  const ManifoldPtr m = make_manifold("hyperbolic:4");
  const TestSaddle saddle = separable_distance_saddle(m, 0.8, false, 0, Rng(14));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.rounds = 15;
  cfg.gap_cadence = 0;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  const RadiusAuditReport audit = iterate_radius_audit(res.trace, *m, *m, saddle.xstar,
                                                       saddle.ystar, saddle.initial_distance);
  CHECK(audit.rounds_checked == 15);
  CHECK(audit.secondary_violations == 0);
  CHECK(audit.played_violations == 0);

  // shrinking the claimed radius manufactures violations, so the audit bites
  const RadiusAuditReport strict = iterate_radius_audit(res.trace, *m, *m, saddle.xstar,
                                                        saddle.ystar,
                                                        saddle.initial_distance / 100);
  CHECK(strict.secondary_violations > 0);
}

TEST_CASE("rioda trace file has blank cells for unmeasured gaps") {
  const TestSaddle saddle = euclidean_separable_quadratic_saddle(2, 0.5, 1.0, 2.0, Rng(15));
  MinMaxConfig cfg = config_for(saddle);
  cfg.method = ProxMethod::crgd;
  cfg.rounds = 10;
  cfg.gap_cadence = 5;
  cfg.schedule_eps = 1e-4;
  const RiodaResult res = rioda_run(saddle.oracle, cfg);
  const auto path = std::filesystem::temp_directory_path() / "riopt-rioda-trace.csv";
  write_rioda_trace(path, res.trace);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "round,duality_gap,gap_certificate_slack,dist_to_saddle,eps_t,inner_iterations_x,"
        "inner_iterations_y,cumulative_gradient_calls,wall_time_ms");
  std::getline(in, line);  // round 1: no gap measured
  CHECK(line.find(",,") != std::string::npos);
}
