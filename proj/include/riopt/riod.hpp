#pragma once

#include <filesystem>
#include <vector>

#include "riopt/subsolvers.hpp"

namespace riopt {

enum class LipsMode { declared, adaptive };

struct RiodConfig {
  Scalar eta = 0.1;             // proximal parameter
  ConstraintSetPtr set;         // compact feasible set (finite diameter)
  Scalar kappa_min = 0;         // curvature lower bound
  Scalar smoothness = 0;        // L of losses and hints on the set
  LipsMode lips_mode = LipsMode::adaptive;
  Scalar lips = 0;              // used in declared mode
  int horizon = 0;              // T
  ProxMethod method = ProxMethod::prgd;
  Point x1;
  int inner_budget = 10000;
};

/// Revealed losses, one g-convex L-smooth oracle per round (1-based).
struct LossStream {
  std::function<ObjectiveOracle(int)> at;
  int horizon = 0;
};

struct HintPolicy {
  enum class Mode { zero, previous_loss, external };
  Mode mode = Mode::zero;
  std::function<ObjectiveOracle(int)> external;

  static HintPolicy zero() { return {Mode::zero, nullptr}; }
  static HintPolicy previous_loss() { return {Mode::previous_loss, nullptr}; }
  static HintPolicy external_fn(std::function<ObjectiveOracle(int)> fn) {
    return {Mode::external, std::move(fn)};
  }
};

struct RegretRecord {
  std::vector<Point> played;               // x~_t, the actions
  std::vector<Point> secondary;            // x_t, t = 1..T
  Point secondary_final;                   // x_{T+1}
  std::vector<Scalar> loss_values;         // l_t(x~_t)
  std::vector<Scalar> optimism_terms;      // |grad l_t(x~_t) - grad l~_t(x~_t)|^2
  std::vector<Scalar> eps_values;          // eps_t at the accepted inner iterate
  std::vector<Scalar> dist_center_played;  // d(x_t, x~_t)
  std::vector<int> inner_iterations;       // both prox solves of the round
  std::vector<long> gradient_calls;        // oracle gradient calls of the round

  int rounds() const { return static_cast<int>(played.size()); }
};

/// Precision parameter of the implicit update,
///   eps_t = [ max{4, (t+1)^2 (15 + 8 eta^2 L^2
///                  + 2 eta^2 lips^2 (D^-2 + 48 |kmin|))} ]^-1 / (8 eta).
/// In adaptive mode `lips_or_grad_norm` carries the hint-gradient norm at the
/// current inner iterate instead of a global Lipschitz constant.
Scalar precision_riod(int t, const RiodConfig& cfg, Scalar lips_or_grad_norm);

/// Runs the implicit optimistic online loop: per round an inexact prox step
/// on the hint picks the action, then an inexact prox step on the revealed
/// loss advances the secondary iterate.
RegretRecord riod_run(const LossStream& stream, const HintPolicy& hints, const RiodConfig& cfg);

Scalar regret(const RegretRecord& record, const LossStream& stream, const Point& u,
              const ConstraintSet& set);

/// Returns (sum_t l_t(x~_t) - l_t(u_t), P_T) where P_T sums consecutive
/// comparator distances. u_seq may have T or T+1 entries.
std::pair<Scalar, Scalar> dynamic_regret(const RegretRecord& record, const LossStream& stream,
                                         const std::vector<Point>& u_seq,
                                         const ConstraintSet& set);

/// Right-hand side of the static regret guarantee, 3D^2/(2 eta) + eta * sum
/// of optimism terms.
Scalar regret_bound(const RegretRecord& record, const RiodConfig& cfg);

/// Dynamic variant (2 P_T D + 3 D^2)/(2 eta) + sum(eta opt_t -
/// (mu/4) d(x_{t+1}, u_t)^2).
Scalar regret_bound(const RegretRecord& record, const RiodConfig& cfg,
                    const std::vector<Point>& u_seq, Scalar mu);

/// One CSV row per round: t, loss_value, optimism_term, dist_x_xtilde,
/// eps_t, inner_iterations, cumulative_regret_vs_fixed_u.
void write_riod_trace(const std::filesystem::path& path, const RegretRecord& record,
                      const LossStream& stream, const Point& u);

}  // namespace riopt
