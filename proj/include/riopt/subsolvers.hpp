#pragma once

#include <limits>
#include <string>

#include "riopt/constraints.hpp"
#include "riopt/oracle.hpp"

namespace riopt {

enum class StopMode { fixed_iterations, epsilon_certificate, grad_norm };

struct StoppingRule {
  StopMode mode = StopMode::epsilon_certificate;
  int budget = 10000;
  Scalar epsilon = 1e-8;
  std::optional<Scalar> step_size;  // overrides the default 1/L step

  static StoppingRule fixed(int iterations, std::optional<Scalar> step = std::nullopt) {
    return {StopMode::fixed_iterations, iterations, 0, step};
  }
  static StoppingRule certificate(Scalar eps, int budget = 10000) {
    return {StopMode::epsilon_certificate, budget, eps, std::nullopt};
  }
  static StoppingRule grad_below(Scalar eps, int budget = 10000) {
    return {StopMode::grad_norm, budget, eps, std::nullopt};
  }
};

struct SubsolverReport {
  int iterations = 0;
  long gradient_calls = 0;
  Scalar certificate = std::numeric_limits<Scalar>::infinity();
  Scalar final_grad_norm = std::numeric_limits<Scalar>::quiet_NaN();
};

/// Thrown when an iteration budget runs out; carries the best iterate and the
/// best certificate achieved so far.
class SolverBudgetError : public std::runtime_error {
 public:
  SolverBudgetError(const std::string& what, Point best, SubsolverReport report)
      : std::runtime_error(what), best_(std::move(best)), report_(report) {}

  const Point& best_point() const { return best_; }
  const SubsolverReport& report() const { return report_; }

 private:
  Point best_;
  SubsolverReport report_;
};

using SolveResult = std::pair<Point, SubsolverReport>;

/// Riemannian gradient descent, x <- exp(x, -(1/L) grad f(x)).
SolveResult rgd(const Manifold& m, const ObjectiveOracle& f, const Point& x0,
                const StoppingRule& rule);

/// Projected Riemannian gradient descent; every iterate stays feasible.
SolveResult prgd(const Manifold& m, const ObjectiveOracle& f, const ConstraintSet& set,
                 const Point& x0, const StoppingRule& rule);

/// One composite step: argmin over the set of
///   <grad f(x), log_x(y)> + (lbar/2) d(x, y)^2 + g(y),
/// solved in closed form on Euclidean space when g is a quadratic-distance
/// term, and by an inner projected-gradient solve (relative tolerance 1e-10)
/// otherwise.
Point crgd_step(const Manifold& m, const ObjectiveOracle& f, const ObjectiveOracle& g,
                const ConstraintSet& set, const Point& x, Scalar lbar);

/// Composite Riemannian gradient descent for F = f + g with f smooth and
/// F strongly g-convex on the set; per-step value gap shrinks by
/// (1 - min{mu/4L, 1/2}).
SolveResult crgd(const Manifold& m, const ObjectiveOracle& f, const ObjectiveOracle& g,
                 const ConstraintSet& set, const Point& x0, const StoppingRule& rule);

enum class ProxMethod { prgd, crgd, rgd };
ProxMethod parse_prox_method(const std::string& name);
std::string to_string(ProxMethod method);

/// The regularized subproblem F(x) = loss(x) + (1/2 eta) d(x, center)^2,
/// minimized over `set`; F is (1/eta)-strongly g-convex there.
struct ProxSubproblem {
  ObjectiveOracle loss;
  Point center;
  Scalar eta = 0;
  ConstraintSetPtr set;
};

/// eps_t as a function of the loss-gradient norm and the distance from the
/// prox center at the current inner iterate; constant for declared-constant
/// schedules.
using PrecisionFn = std::function<Scalar(Scalar loss_grad_norm, Scalar dist_from_center)>;

/// Solves a prox subproblem until a proven bound on
/// (F(x) - F(x*)) / d(center, x*)^2 drops below eps_t. The certificates, by
/// method (x* the exact constrained minimizer, all quantities observable):
///   prgd: (Lbar zeta_{R0}/2) prod_i (1 - 1/(4 (L eta + zeta_D) zeta_{Ri}))
///         with Ri = |grad F(x_i)| / Lbar from the per-step gradients;
///   crgd: (L/2) exp(-(k-1) min{1/(4 L eta), 1/2}) after k steps;
///   rgd (unconstrained sets only): stop once
///         |grad F(x)|^2 <= eps_t d(center, x)^2 / (eta + 2 eta^2 eps_t).
/// Throws SolverBudgetError carrying the best certificate on exhaustion.
SolveResult solve_prox_certified(const Manifold& m, const ProxSubproblem& sub, Scalar eps_t,
                                 ProxMethod method, int budget = 10000);
SolveResult solve_prox_certified(const Manifold& m, const ProxSubproblem& sub,
                                 const PrecisionFn& eps_fn, ProxMethod method, int budget = 10000);

}  // namespace riopt
