#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "riopt/subsolvers.hpp"

namespace riopt {

enum class MinMaxCase { constrained_cvx, constrained_scsc, unconstrained_cvx, unconstrained_scsc };

/// Proximal parameter of the min-max driver, exactly 1/(4L).
Scalar eta_from_smoothness(Scalar smoothness);

/// Inner precision schedule per case. For constrained cases `lips_or_local`
/// carries the Lipschitz bound (declared) or the loss-gradient norm at the
/// current inner iterate (adaptive), and `eps_target` the accuracy embedded
/// in the schedule. For unconstrained cases `r_or_local` carries the initial
/// distance R (declared) or d(center, current inner iterate) (adaptive);
/// the adaptive form uses the proof's observable constants.
Scalar precision_rioda(MinMaxCase mode, int t, Scalar smoothness, Scalar mu,
                       Scalar lips_or_local, Scalar kappa_min, Scalar eps_target,
                       Scalar r_or_local, bool adaptive);

struct MinMaxConfig {
  ManifoldPtr manifold_x, manifold_y;
  ConstraintSetPtr set_x, set_y;  // WholeManifold for the unconstrained case
  Scalar smoothness = 0;          // L
  Scalar mu = 0;
  Scalar kappa_min = 0;

  int rounds = 0;                          // fixed-T mode when > 0
  std::optional<Scalar> eps_target;        // epsilon-targeted mode (needs R)
  std::optional<Scalar> initial_distance;  // R = d(x1,x*) + d(y1,y*) bound
  std::optional<Scalar> schedule_eps;      // accuracy placed inside constrained schedules

  bool adaptive = true;  // local-quantity schedules, no Lips/R knowledge
  Scalar lips = 0;       // declared mode only

  ProxMethod method = ProxMethod::prgd;
  Point x1, y1;

  int gap_cadence = 10;   // 0 disables gap measurement
  Scalar gap_inner_tol = 1e-9;
  bool gap_on_average = true;
  std::optional<std::pair<Point, Point>> reference_saddle;
  int inner_budget = 10000;
  bool parallel_blocks = true;

  /// Benchmark-only relaxation of the eta*L = 1/4 invariant (the robust
  /// Karcher experiments grid-search eta); rioda_run keeps 1/(4L) otherwise.
  std::optional<Scalar> eta_override;
  std::optional<StoppingRule> inner_rule_override;  // e.g. fixed 3-step PRGD

  Scalar eta() const { return eta_override ? *eta_override : eta_from_smoothness(smoothness); }
  bool constrained() const;
  MinMaxCase minmax_case() const;
};

struct IterateState {
  Point x, y;            // secondary iterates
  Point x_played, y_played;
};

struct AveragingState {
  Point xbar, ybar;
  int count = 0;
};

/// Folds (new_x, new_y) into the running geodesic average; requires
/// avg.count == t and moves the average a 1/(t+1) fraction toward the new
/// point. The Euclidean specialization is the running arithmetic mean.
AveragingState geodesic_average_fold(const Manifold& mx, const Manifold& my, AveragingState avg,
                                     const Point& new_x, const Point& new_y, int t);

struct RiodaRound {
  int t = 0;
  Point x, y;                  // secondary iterates at the start of the round
  Point x_played, y_played;
  Scalar eps = 0;
  int inner_iterations_x = 0;  // both x-block prox solves
  int inner_iterations_y = 0;
  long gradient_calls = 0;     // this round
  std::optional<Scalar> duality_gap;
  std::optional<Scalar> gap_slack;
  std::optional<Scalar> dist_to_saddle;
  double wall_ms = 0;
};

struct ConvergenceTrace {
  std::vector<RiodaRound> rounds;
  long total_gradient_calls = 0;
};

struct RiodaResult {
  Point x_out, y_out;
  ConvergenceTrace trace;
  AveragingState average;
};

/// One round of the min-max driver: the played pair solves the two
/// regularized sections at the current secondaries, then the secondaries
/// advance against the freshly played opponents. The x and y block solves
/// share no state and run as two parallel tasks.
IterateState rioda_round(const IterateState& state, const SaddleOracle& oracle,
                         const MinMaxConfig& cfg, int t, RiodaRound* log);

/// Full driver. Output is the last played pair when mu > 0 and the uniform
/// geodesic average of the played pairs otherwise.
RiodaResult rioda_run(const SaddleOracle& oracle, const MinMaxConfig& cfg);

/// T from the accuracy target per the convergence guarantees.
int rioda_iteration_count(MinMaxCase mode, Scalar smoothness, Scalar mu, Scalar r, Scalar eps);

struct GapResult {
  Scalar gap = 0;
  Scalar slack = 0;
  long gradient_calls = 0;
};

/// max_y f(xhat, y) - min_x f(x, yhat) via two certified solves; `gap` is the
/// inner-estimate difference and `slack` the sum of the two certificates, so
/// the true gap lies in [gap, gap + slack] and gap >= -slack.
GapResult duality_gap(const SaddleOracle& oracle, const ConstraintSet& set_x,
                      const ConstraintSet& set_y, const Point& xhat, const Point& yhat,
                      Scalar inner_tol, int budget = 200000);

struct RadiusAuditReport {
  int rounds_checked = 0;
  int secondary_violations = 0;  // d(x_t,x*) + d(y_t,y*) > 2R
  int played_violations = 0;     // d(x~_t,x*) + d(y~_t,y*) > 7R
  Scalar max_secondary_ratio = 0;
  Scalar max_played_ratio = 0;
};

/// Checks the boundedness guarantees of the unconstrained analysis against a
/// known saddle: secondaries within 2R, played iterates within 7R.
RadiusAuditReport iterate_radius_audit(const ConvergenceTrace& trace, const Manifold& mx,
                                       const Manifold& my, const Point& xstar, const Point& ystar,
                                       Scalar r, Scalar tol = 1e-9);

/// CSV: round, duality_gap, gap_certificate_slack, dist_to_saddle, eps_t,
/// inner_iterations_x, inner_iterations_y, cumulative_gradient_calls,
/// wall_time_ms. Unmeasured cells stay blank.
void write_rioda_trace(const std::filesystem::path& path, const ConvergenceTrace& trace);

}  // namespace riopt
