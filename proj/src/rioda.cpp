#include "riopt/rioda.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "riopt/trace.hpp"

namespace riopt {

Scalar eta_from_smoothness(Scalar smoothness) {
  if (!(smoothness > 0)) {
    throw std::domain_error("eta_from_smoothness: smoothness must be positive");
  }
  return 1.0 / (4.0 * smoothness);
}

Scalar precision_rioda(MinMaxCase mode, int t, Scalar smoothness, Scalar mu,
                       Scalar lips_or_local, Scalar kappa_min, Scalar eps_target,
                       Scalar r_or_local, bool adaptive) {
  if (t < 1) throw std::domain_error("precision_rioda: rounds are 1-based");
  const Scalar l = smoothness;
  if (!(l > 0)) throw std::domain_error("precision_rioda: smoothness must be positive");
  const Scalar k = std::abs(kappa_min);
  const Scalar tp1 = static_cast<Scalar>(t + 1);

  switch (mode) {
    case MinMaxCase::constrained_cvx: {
      if (!(eps_target > 0)) {
        throw std::domain_error("precision_rioda: constrained schedule needs a target accuracy");
      }
      const Scalar lips2 = lips_or_local * lips_or_local;
      const Scalar denom = tp1 * tp1 * (40.0 + lips2 / l * (eps_target / 6.0 + 12.0 * k / l));
      return l * std::min<Scalar>(1.0 / 8.0, 1.0 / denom);
    }
    case MinMaxCase::constrained_scsc: {
      if (!(eps_target > 0)) {
        throw std::domain_error("precision_rioda: constrained schedule needs a target accuracy");
      }
      if (!(mu > 0)) throw std::domain_error("precision_rioda: scsc schedule needs mu > 0");
      const Scalar lips2 = lips_or_local * lips_or_local;
      const Scalar lead = std::max(tp1 * tp1, 16.0 * l / mu);
      const Scalar denom = lead * (40.0 + lips2 / l * (eps_target / 4.0 + 12.0 * k / l));
      return l * std::min<Scalar>(1.0 / 8.0, 1.0 / denom);
    }
    case MinMaxCase::unconstrained_cvx: {
      const Scalar d2 = r_or_local * r_or_local;
      if (adaptive) {
        return l * std::min<Scalar>(1.0 / 8.0, 1.0 / (tp1 * tp1 * (32.0 + 327.0 * d2 * k)));
      }
      return (l / 8.0) * std::min<Scalar>(1.0, 1.0 / (2.0 * tp1 * tp1 * (37.0 + 2385.0 * d2 * k)));
    }
    case MinMaxCase::unconstrained_scsc: {
      if (!(mu > 0)) throw std::domain_error("precision_rioda: scsc schedule needs mu > 0");
      const Scalar d2 = r_or_local * r_or_local;
      if (adaptive) {
        return l * std::min<Scalar>(1.0 / 8.0, 4.0 * l / (mu * (25.0 + 220.0 * d2 * k)));
      }
      return (l / 8.0) * std::min<Scalar>(1.0, mu / (8.0 * l * (37.0 + 2385.0 * d2 * k)));
    }
  }
  throw std::logic_error("precision_rioda: bad case");
}

bool MinMaxConfig::constrained() const {
  const bool bx = set_x && set_x->diameter().has_value();
  const bool by = set_y && set_y->diameter().has_value();
  if (bx != by) {
    throw std::invalid_argument("MinMaxConfig: both sets must be bounded or both unbounded");
  }
  return bx;
}

MinMaxCase MinMaxConfig::minmax_case() const {
  if (constrained()) {
    return mu > 0 ? MinMaxCase::constrained_scsc : MinMaxCase::constrained_cvx;
  }
  return mu > 0 ? MinMaxCase::unconstrained_scsc : MinMaxCase::unconstrained_cvx;
}

AveragingState geodesic_average_fold(const Manifold& mx, const Manifold& my, AveragingState avg,
                                     const Point& new_x, const Point& new_y, int t) {
  if (avg.count != t || t < 1) {
    throw std::invalid_argument("geodesic_average_fold: expected avg.count == t >= 1");
  }
  const Scalar w = 1.0 / static_cast<Scalar>(t + 1);
  avg.xbar = mx.exp(avg.xbar, w * mx.log(avg.xbar, new_x));
  avg.ybar = my.exp(avg.ybar, w * my.log(avg.ybar, new_y));
  avg.count = t + 1;
  return avg;
}

int rioda_iteration_count(MinMaxCase mode, Scalar smoothness, Scalar mu, Scalar r, Scalar eps) {
  const Scalar l = smoothness;
  switch (mode) {
    case MinMaxCase::constrained_cvx:
      return static_cast<int>(std::ceil(8.0 * l * r * r / eps));
    case MinMaxCase::constrained_scsc:
      return static_cast<int>(std::ceil(17.0 * l / mu * std::log(4.0 * l * r * r / eps)));
    case MinMaxCase::unconstrained_cvx:
      return static_cast<int>(std::ceil(6.0 * l * r * r / eps));
    case MinMaxCase::unconstrained_scsc:
      return static_cast<int>(std::ceil(17.0 * l / mu * std::log(2.0 * l * r * r / eps)));
  }
  throw std::logic_error("rioda_iteration_count: bad case");
}

namespace {

PrecisionFn block_precision_fn(const MinMaxConfig& cfg, MinMaxCase mode, int t, Scalar eps_sched,
                               Scalar* record_eps) {
  const Scalar l = cfg.smoothness, mu = cfg.mu, k = cfg.kappa_min;
  if (!cfg.adaptive) {
    const Scalar fixed_param =
        cfg.constrained() ? cfg.lips : cfg.initial_distance.value_or(0);
    const Scalar eps = precision_rioda(mode, t, l, mu, fixed_param, k, eps_sched, fixed_param,
                                       false);
    if (record_eps) *record_eps = eps;
    return [eps](Scalar, Scalar) { return eps; };
  }
  if (cfg.constrained()) {
    return [mode, t, l, mu, k, eps_sched, record_eps](Scalar grad_norm, Scalar) {
      const Scalar eps = precision_rioda(mode, t, l, mu, grad_norm, k, eps_sched, 0, true);
      if (record_eps) *record_eps = eps;
      return eps;
    };
  }
  return [mode, t, l, mu, k, eps_sched, record_eps](Scalar, Scalar dist) {
    const Scalar eps = precision_rioda(mode, t, l, mu, 0, k, eps_sched, dist, true);
    if (record_eps) *record_eps = eps;
    return eps;
  };
}

SolveResult run_block(const Manifold& m, const ObjectiveOracle& loss, const Point& center,
                      const MinMaxConfig& cfg, const ConstraintSetPtr& set,
                      const PrecisionFn& eps_fn, const char* label, int t) {
  try {
    if (cfg.inner_rule_override) {
      StoppingRule rule = *cfg.inner_rule_override;
      if (rule.mode != StopMode::fixed_iterations) {
        throw std::invalid_argument("rioda: inner rule override must be fixed-iteration");
      }
      // fixed-step benchmark mode: plain projected descent on the composite
      const Scalar eta = cfg.eta();
      ObjectiveOracle composite;
      composite.value = [&m, &loss, center, eta](const Point& p) {
        const Scalar d = m.dist(p, center);
        return loss.value(p) + 0.5 * d * d / eta;
      };
      composite.gradient = [&m, &loss, center, eta](const Point& p) {
        return (loss.gradient(p) - (1.0 / eta) * m.log(p, center).coords).eval();
      };
      composite.smoothness = loss.smoothness + zeta(8.0, m.kappa_min()) / eta;
      composite.strong_convexity = 1.0 / eta;
      return prgd(m, composite, *set, center, rule);
    }
    return solve_prox_certified(m, {loss, center, cfg.eta(), set}, eps_fn, cfg.method,
                                cfg.inner_budget);
  } catch (const SolverBudgetError& e) {
    throw SolverBudgetError("rioda round " + std::to_string(t) + " block " + label + ": " +
                                e.what(),
                            e.best_point(), e.report());
  }
}

}  // namespace

IterateState rioda_round(const IterateState& state, const SaddleOracle& oracle,
                         const MinMaxConfig& cfg, int t, RiodaRound* log) {
  const Manifold& mx = *cfg.manifold_x;
  const Manifold& my = *cfg.manifold_y;
  const MinMaxCase mode = cfg.minmax_case();
  const Scalar eps_sched = cfg.schedule_eps.value_or(cfg.eps_target.value_or(1.0));

  Scalar eps_seen_x = 0, eps_seen_y = 0;
  const PrecisionFn eps_x = block_precision_fn(cfg, mode, t, eps_sched, &eps_seen_x);
  const PrecisionFn eps_y = block_precision_fn(cfg, mode, t, eps_sched, &eps_seen_y);

  // played pair: prox on f(., y_t) at x_t and on -f(x_t, .) at y_t; the two
  // solves are independent and run concurrently
  const auto solve_x_played = [&] {
    return run_block(mx, x_section(oracle, state.y), state.x, cfg, cfg.set_x, eps_x, "x~", t);
  };
  const auto solve_y_played = [&] {
    return run_block(my, neg_y_section(oracle, state.x), state.y, cfg, cfg.set_y, eps_y, "y~", t);
  };

  SolveResult rx, ry;
  if (cfg.parallel_blocks) {
    auto fy = std::async(std::launch::async, solve_y_played);
    rx = solve_x_played();
    ry = fy.get();
  } else {
    rx = solve_x_played();
    ry = solve_y_played();
  }
  const Point x_played = rx.first;
  const Point y_played = ry.first;

  // secondary advance against the freshly played opponents
  const auto solve_x_next = [&] {
    return run_block(mx, x_section(oracle, y_played), state.x, cfg, cfg.set_x, eps_x, "x", t);
  };
  const auto solve_y_next = [&] {
    return run_block(my, neg_y_section(oracle, x_played), state.y, cfg, cfg.set_y, eps_y, "y", t);
  };

  SolveResult nx, ny;
  if (cfg.parallel_blocks) {
    auto fy = std::async(std::launch::async, solve_y_next);
    nx = solve_x_next();
    ny = fy.get();
  } else {
    nx = solve_x_next();
    ny = solve_y_next();
  }

  if (log) {
    log->t = t;
    log->x = state.x;
    log->y = state.y;
    log->x_played = x_played;
    log->y_played = y_played;
    log->eps = std::max(eps_seen_x, eps_seen_y);
    log->inner_iterations_x = rx.second.iterations + nx.second.iterations;
    log->inner_iterations_y = ry.second.iterations + ny.second.iterations;
    log->gradient_calls = rx.second.gradient_calls + ry.second.gradient_calls +
                          nx.second.gradient_calls + ny.second.gradient_calls;
  }
  return {nx.first, ny.first, x_played, y_played};
}

RiodaResult rioda_run(const SaddleOracle& oracle, const MinMaxConfig& cfg) {
  if (!cfg.manifold_x || !cfg.manifold_y) throw std::invalid_argument("rioda_run: missing manifolds");
  if (!cfg.set_x || !cfg.set_y) throw std::invalid_argument("rioda_run: missing constraint sets");
  if (!cfg.eta_override && !(cfg.smoothness > 0)) {
    throw std::invalid_argument("rioda_run: smoothness must be positive");
  }

  const MinMaxCase mode = cfg.minmax_case();
  int rounds = cfg.rounds;
  if (rounds <= 0) {
    if (!cfg.eps_target || !cfg.initial_distance) {
      throw std::invalid_argument(
          "rioda_run: need either a fixed round count or (eps_target, initial_distance)");
    }
    rounds = rioda_iteration_count(mode, cfg.smoothness, cfg.mu, *cfg.initial_distance,
                                   *cfg.eps_target);
  }

  const Manifold& mx = *cfg.manifold_x;
  const Manifold& my = *cfg.manifold_y;

  IterateState state{cfg.x1, cfg.y1, cfg.x1, cfg.y1};
  AveragingState avg;
  RiodaResult result;
  result.trace.rounds.reserve(rounds);

  const bool can_measure_gap =
      cfg.gap_cadence > 0 && (cfg.constrained() || cfg.mu > 0);

  for (int t = 1; t <= rounds; ++t) {
    const auto start = std::chrono::steady_clock::now();
    RiodaRound log;
    state = rioda_round(state, oracle, cfg, t, &log);

    if (t == 1) {
      avg = {state.x_played, state.y_played, 1};
    } else {
      avg = geodesic_average_fold(mx, my, avg, state.x_played, state.y_played, t - 1);
    }

    if (cfg.reference_saddle) {
      log.dist_to_saddle = mx.dist(state.x, cfg.reference_saddle->first) +
                           my.dist(state.y, cfg.reference_saddle->second);
    }
    if (can_measure_gap && (t % cfg.gap_cadence == 0 || t == rounds)) {
      const bool on_avg = cfg.gap_on_average && cfg.mu <= 0;
      const Point& gx = on_avg ? avg.xbar : state.x_played;
      const Point& gy = on_avg ? avg.ybar : state.y_played;
      const GapResult gap =
          duality_gap(oracle, *cfg.set_x, *cfg.set_y, gx, gy, cfg.gap_inner_tol);
      log.duality_gap = gap.gap;
      log.gap_slack = gap.slack;
    }
    log.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    result.trace.total_gradient_calls += log.gradient_calls;
    result.trace.rounds.push_back(std::move(log));
  }

  result.average = avg;
  if (cfg.mu > 0) {
    result.x_out = state.x_played;
    result.y_out = state.y_played;
  } else {
    result.x_out = avg.xbar;
    result.y_out = avg.ybar;
  }
  return result;
}

GapResult duality_gap(const SaddleOracle& oracle, const ConstraintSet& set_x,
                      const ConstraintSet& set_y, const Point& xhat, const Point& yhat,
                      Scalar inner_tol, int budget) {
  const Manifold& mx = set_x.manifold();
  const Manifold& my = set_y.manifold();
  if (!(inner_tol > 0)) throw std::invalid_argument("duality_gap: inner_tol must be positive");

  GapResult out;
  // max_y f(xhat, .) as minimization of its negation
  const ObjectiveOracle up = neg_y_section(oracle, xhat);
  const auto [ybest, yrep] = prgd(my, up, set_y, yhat, StoppingRule::certificate(inner_tol, budget));
  // min_x f(., yhat)
  const ObjectiveOracle low = x_section(oracle, yhat);
  const auto [xbest, xrep] = prgd(mx, low, set_x, xhat, StoppingRule::certificate(inner_tol, budget));

  out.gap = oracle.value(xhat, ybest) - oracle.value(xbest, yhat);
  out.slack = xrep.certificate + yrep.certificate;
  out.gradient_calls = xrep.gradient_calls + yrep.gradient_calls;
  return out;
}

RadiusAuditReport iterate_radius_audit(const ConvergenceTrace& trace, const Manifold& mx,
                                       const Manifold& my, const Point& xstar, const Point& ystar,
                                       Scalar r, Scalar tol) {
  RadiusAuditReport report;
  for (const RiodaRound& round : trace.rounds) {
    ++report.rounds_checked;
    const Scalar secondary = mx.dist(round.x, xstar) + my.dist(round.y, ystar);
    const Scalar played = mx.dist(round.x_played, xstar) + my.dist(round.y_played, ystar);
    report.max_secondary_ratio = std::max(report.max_secondary_ratio, secondary / r);
    report.max_played_ratio = std::max(report.max_played_ratio, played / r);
    if (secondary > 2 * r + tol) ++report.secondary_violations;
    if (played > 7 * r + tol) ++report.played_violations;
  }
  return report;
}

void write_rioda_trace(const std::filesystem::path& path, const ConvergenceTrace& trace) {
  CsvWriter csv(path, {"round", "duality_gap", "gap_certificate_slack", "dist_to_saddle", "eps_t",
                       "inner_iterations_x", "inner_iterations_y", "cumulative_gradient_calls",
                       "wall_time_ms"});
  long cumulative = 0;
  for (const RiodaRound& r : trace.rounds) {
    cumulative += r.gradient_calls;
    csv.row({CsvCell(static_cast<long>(r.t)),
             r.duality_gap ? CsvCell(*r.duality_gap) : CsvCell(),
             r.gap_slack ? CsvCell(*r.gap_slack) : CsvCell(),
             r.dist_to_saddle ? CsvCell(*r.dist_to_saddle) : CsvCell(), CsvCell(r.eps),
             CsvCell(static_cast<long>(r.inner_iterations_x)),
             CsvCell(static_cast<long>(r.inner_iterations_y)), CsvCell(cumulative),
             CsvCell(r.wall_ms)});
  }
}

}  // namespace riopt
