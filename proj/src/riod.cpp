#include "riopt/riod.hpp"

#include "riopt/trace.hpp"

namespace riopt {

Scalar precision_riod(int t, const RiodConfig& cfg, Scalar lips_or_grad_norm) {
  if (t < 1) throw std::domain_error("precision_riod: rounds are 1-based");
  const auto diam = cfg.set ? cfg.set->diameter() : std::nullopt;
  if (!diam) throw std::domain_error("precision_riod: constraint set must have finite diameter");
  const Scalar d = *diam;
  if (!(d > 0)) throw std::domain_error("precision_riod: set diameter must be positive");
  const Scalar eta = cfg.eta;
  const Scalar l2 = cfg.smoothness * cfg.smoothness;
  const Scalar lips2 = lips_or_grad_norm * lips_or_grad_norm;
  const Scalar tp1 = static_cast<Scalar>(t + 1);
  const Scalar inner =
      tp1 * tp1 *
      (15.0 + 8.0 * eta * eta * l2 + 2.0 * eta * eta * lips2 * (1.0 / (d * d) + 48.0 * std::abs(cfg.kappa_min)));
  return 1.0 / (8.0 * eta * std::max<Scalar>(4.0, inner));
}

namespace {

ObjectiveOracle hint_for_round(const HintPolicy& hints, const LossStream& stream, int t,
                               const ManifoldPtr& dummy) {
  if (t == 1) return zero_oracle(dummy);
  switch (hints.mode) {
    case HintPolicy::Mode::zero: return zero_oracle(dummy);
    case HintPolicy::Mode::previous_loss: return stream.at(t - 1);
    case HintPolicy::Mode::external: return hints.external(t);
  }
  throw std::logic_error("hint_for_round: bad mode");
}

PrecisionFn precision_fn(const RiodConfig& cfg, int t) {
  if (cfg.lips_mode == LipsMode::declared) {
    const Scalar eps = precision_riod(t, cfg, cfg.lips);
    return [eps](Scalar, Scalar) { return eps; };
  }
  return [&cfg, t](Scalar grad_norm, Scalar) { return precision_riod(t, cfg, grad_norm); };
}

}  // namespace

RegretRecord riod_run(const LossStream& stream, const HintPolicy& hints, const RiodConfig& cfg) {
  if (!cfg.set) throw std::invalid_argument("riod_run: missing constraint set");
  const Manifold& m = cfg.set->manifold();
  if (!cfg.set->contains(cfg.x1, 1e-9)) {
    throw std::invalid_argument("riod_run: x1 must lie in the constraint set");
  }
  const int horizon = cfg.horizon > 0 ? cfg.horizon : stream.horizon;
  if (horizon <= 0) throw std::invalid_argument("riod_run: horizon must be positive");

  RegretRecord record;
  record.played.reserve(horizon);
  record.secondary.reserve(horizon);

  Point x = cfg.x1;
  for (int t = 1; t <= horizon; ++t) {
    const ObjectiveOracle hint = hint_for_round(hints, stream, t, nullptr);
    const ObjectiveOracle loss = stream.at(t);
    const PrecisionFn eps_fn = precision_fn(cfg, t);

    SolveResult hint_solve, loss_solve;
    try {
      hint_solve = solve_prox_certified(m, {hint, x, cfg.eta, cfg.set}, eps_fn, cfg.method,
                                        cfg.inner_budget);
      loss_solve = solve_prox_certified(m, {loss, x, cfg.eta, cfg.set}, eps_fn, cfg.method,
                                        cfg.inner_budget);
    } catch (const SolverBudgetError& e) {
      throw SolverBudgetError("riod round " + std::to_string(t) + ": " + e.what(), e.best_point(),
                              e.report());
    }
    const Point& played = hint_solve.first;

    const Vec g_loss = loss.gradient(played);
    const Vec g_hint = hint.gradient(played);
    const Scalar optim = m.inner({played, (g_loss - g_hint).eval()}, {played, (g_loss - g_hint).eval()});
    const Scalar eps_recorded = cfg.lips_mode == LipsMode::declared
                                    ? precision_riod(t, cfg, cfg.lips)
                                    : precision_riod(t, cfg, m.norm({played, g_hint}));

    record.played.push_back(played);
    record.secondary.push_back(x);
    record.loss_values.push_back(loss.value(played));
    record.optimism_terms.push_back(optim);
    record.eps_values.push_back(eps_recorded);
    record.dist_center_played.push_back(m.dist(x, played));
    record.inner_iterations.push_back(hint_solve.second.iterations + loss_solve.second.iterations);
    record.gradient_calls.push_back(hint_solve.second.gradient_calls +
                                    loss_solve.second.gradient_calls + 2);

    x = loss_solve.first;
  }
  record.secondary_final = x;
  return record;
}

Scalar regret(const RegretRecord& record, const LossStream& stream, const Point& u,
              const ConstraintSet& set) {
  if (!set.contains(u, 1e-9)) {
    throw ContractError("regret: comparator lies outside the constraint set");
  }
  Scalar total = 0;
  for (int t = 1; t <= record.rounds(); ++t) {
    total += record.loss_values[t - 1] - stream.at(t).value(u);
  }
  return total;
}

std::pair<Scalar, Scalar> dynamic_regret(const RegretRecord& record, const LossStream& stream,
                                         const std::vector<Point>& u_seq,
                                         const ConstraintSet& set) {
  const int rounds = record.rounds();
  if (static_cast<int>(u_seq.size()) < rounds) {
    throw std::invalid_argument("dynamic_regret: comparator sequence shorter than the horizon");
  }
  const Manifold& m = set.manifold();
  Scalar total = 0;
  for (int t = 1; t <= rounds; ++t) {
    if (!set.contains(u_seq[t - 1], 1e-9)) {
      throw ContractError("dynamic_regret: comparator " + std::to_string(t) + " outside the set");
    }
    total += record.loss_values[t - 1] - stream.at(t).value(u_seq[t - 1]);
  }
  Scalar path = 0;
  for (std::size_t i = 0; i + 1 < u_seq.size(); ++i) {
    path += m.dist(u_seq[i], u_seq[i + 1]);
  }
  return {total, path};
}

Scalar regret_bound(const RegretRecord& record, const RiodConfig& cfg) {
  const Scalar d = cfg.set->diameter().value();
  Scalar optim = 0;
  for (const Scalar o : record.optimism_terms) optim += o;
  return 3.0 * d * d / (2.0 * cfg.eta) + cfg.eta * optim;
}

Scalar regret_bound(const RegretRecord& record, const RiodConfig& cfg,
                    const std::vector<Point>& u_seq, Scalar mu) {
  const Manifold& m = cfg.set->manifold();
  const Scalar d = cfg.set->diameter().value();
  Scalar path = 0;
  for (std::size_t i = 0; i + 1 < u_seq.size(); ++i) path += m.dist(u_seq[i], u_seq[i + 1]);

  Scalar total = (2.0 * path * d + 3.0 * d * d) / (2.0 * cfg.eta);
  for (int t = 1; t <= record.rounds(); ++t) {
    const Point& next_secondary =
        t < record.rounds() ? record.secondary[t] : record.secondary_final;
    const Scalar dd = m.dist(next_secondary, u_seq[t - 1]);
    total += cfg.eta * record.optimism_terms[t - 1] - 0.25 * mu * dd * dd;
  }
  return total;
}

void write_riod_trace(const std::filesystem::path& path, const RegretRecord& record,
                      const LossStream& stream, const Point& u) {
  CsvWriter csv(path, {"t", "loss_value", "optimism_term", "dist_x_xtilde", "eps_t",
                       "inner_iterations", "cumulative_regret_vs_fixed_u"});
  Scalar cum = 0;
  for (int t = 1; t <= record.rounds(); ++t) {
    cum += record.loss_values[t - 1] - stream.at(t).value(u);
    csv.row({CsvCell(static_cast<long>(t)), CsvCell(record.loss_values[t - 1]),
             CsvCell(record.optimism_terms[t - 1]), CsvCell(record.dist_center_played[t - 1]),
             CsvCell(record.eps_values[t - 1]),
             CsvCell(static_cast<long>(record.inner_iterations[t - 1])), CsvCell(cum)});
  }
}

}  // namespace riopt
