#include "riopt/subsolvers.hpp"

#include <cassert>
#include <cmath>

namespace riopt {

namespace {

constexpr Scalar kZeroGrad = 1e-150;

void check_finite(const Vec& g, const char* who, int iteration) {
  if (!g.allFinite()) {
    throw std::runtime_error(std::string(who) + ": non-finite gradient at iteration " +
                             std::to_string(iteration));
  }
}

// Computable optimality certificate for min_{set} f from the gradient at x:
// the strong-convexity bound |g|^2/(2 mu) and, on bounded sets, the support
// bound sup_z <-g, log_x(z)> plus a weak-convexity correction
// (deficit/2) * sum of squared component diameters. Either one upper-bounds
// f(x) - f*.
Scalar generic_certificate(const Manifold& m, const ConstraintSet* set, const Point& x,
                           const Vec& g, Scalar mu, Scalar deficit) {
  Scalar cert = std::numeric_limits<Scalar>::infinity();
  if (mu > 0 && deficit <= 0) cert = std::min(cert, m.inner({x, g}, {x, g}) / (2 * mu));
  if (set != nullptr && set->diameter()) {
    cert = std::min(cert, set->support_gap(x, {x, (-g).eval()}) +
                              0.5 * deficit * set->squared_diameter_sum());
  }
  return cert;
}

// Shared gradient-descent core; set == nullptr runs unconstrained.
SolveResult descent_loop(const Manifold& m, const ObjectiveOracle& f, const ConstraintSet* set,
                         const Point& x0, const StoppingRule& rule, const char* who) {
  Scalar step = 0;
  if (rule.step_size) {
    step = *rule.step_size;
  } else {
    if (!(f.smoothness > 0)) {
      throw std::invalid_argument(std::string(who) + ": oracle must declare smoothness > 0");
    }
    step = 1.0 / f.smoothness;
  }

  Point x = set ? set->project(x0) : x0;
  SubsolverReport report;

  // a weak-convexity deficit leaves an irreducible certificate floor; the
  // epsilon target applies to the reducible part above it
  Scalar cert_floor = 0;
  if (f.weak_convexity_deficit > 0 && set != nullptr && set->diameter()) {
    cert_floor = 0.5 * f.weak_convexity_deficit * set->squared_diameter_sum();
  }

  Point best_x = x;
  Scalar best_cert = std::numeric_limits<Scalar>::infinity();
  int best_k = 0;
  constexpr int kStagnationWindow = 256;

  for (int k = 0;; ++k) {
    report.iterations = k;
    if (rule.mode == StopMode::fixed_iterations && k >= rule.budget) return {x, report};

    const Vec g = f.gradient(x);
    ++report.gradient_calls;
    check_finite(g, who, k);
    const Scalar gnorm = m.norm({x, g});
    report.final_grad_norm = gnorm;

    if (rule.mode == StopMode::grad_norm) {
      report.certificate = gnorm;
      if (gnorm <= rule.epsilon) return {x, report};
    } else if (rule.mode == StopMode::epsilon_certificate) {
      const Scalar cert =
          generic_certificate(m, set, x, g, f.strong_convexity, f.weak_convexity_deficit);
      if (cert < best_cert) {
        best_cert = cert;
        best_x = x;
        best_k = k;
      }
      report.certificate = cert;
      if (cert <= rule.epsilon + cert_floor) return {x, report};
      // the certificate has converged to its achievable floor; hand back the
      // best certified iterate rather than burning the budget
      if (k - best_k >= kStagnationWindow) {
        report.certificate = best_cert;
        return {best_x, report};
      }
    }
    if (gnorm <= kZeroGrad && rule.mode != StopMode::fixed_iterations) {
      report.certificate = 0;
      return {x, report};
    }
    if (rule.mode != StopMode::fixed_iterations && k >= rule.budget) {
      report.certificate = std::min(report.certificate, best_cert);
      throw SolverBudgetError(std::string(who) + ": budget of " + std::to_string(rule.budget) +
                                  " iterations exhausted",
                              rule.mode == StopMode::epsilon_certificate ? best_x : x, report);
    }

    Point next = m.exp(x, -step * TangentVector{x, g});
    x = set ? set->project(next) : std::move(next);
  }
}

ObjectiveOracle distance_regularizer(const Manifold& m, const Point& center, Scalar weight,
                                     Scalar working_radius) {
  ObjectiveOracle o;
  o.value = [&m, center, weight](const Point& p) {
    const Scalar d = m.dist(p, center);
    return 0.5 * weight * d * d;
  };
  o.gradient = [&m, center, weight](const Point& p) {
    return (-weight * m.log(p, center).coords).eval();
  };
  o.smoothness = weight * zeta(working_radius, m.kappa_min());
  o.strong_convexity = weight;
  o.quad_form = QuadraticDistanceForm{center, weight};
  return o;
}

}  // namespace

SolveResult rgd(const Manifold& m, const ObjectiveOracle& f, const Point& x0,
                const StoppingRule& rule) {
  return descent_loop(m, f, nullptr, x0, rule, "rgd");
}

SolveResult prgd(const Manifold& m, const ObjectiveOracle& f, const ConstraintSet& set,
                 const Point& x0, const StoppingRule& rule) {
  return descent_loop(m, f, &set, x0, rule, "prgd");
}

Point crgd_step(const Manifold& m, const ObjectiveOracle& f, const ObjectiveOracle& g,
                const ConstraintSet& set, const Point& x, Scalar lbar) {
  const Vec u = f.gradient(x);
  check_finite(u, "crgd_step", 0);
  const Scalar unorm = m.norm({x, u});

  // Euclidean closed form: the model is a scaled squared distance from its
  // unconstrained minimizer, so the constrained argmin is a metric projection.
  if (m.curvature_bounds().kmin == 0 && g.quad_form) {
    const Scalar w = g.quad_form->weight;
    const Vec y = (lbar * x + w * g.quad_form->point - u) / (lbar + w);
    return set.project(y);
  }

  // General case: projected gradient descent on the model
  //   model(y) = <u, log_x(y)> + (lbar/2) d(x,y)^2 + g(y).
  const Scalar kmin = m.kappa_min();
  const auto model_value = [&](const Point& y) {
    const TangentVector lxy = m.log(x, y);
    const Scalar d = m.norm(lxy);
    return m.inner({x, u}, lxy) + 0.5 * lbar * d * d + g.value(y);
  };
  const auto model_grad = [&](const Point& y) {
    return (m.dlog_adjoint(x, y, u) - lbar * m.log(y, x).coords + g.gradient(y)).eval();
  };

  Point y = set.project(x);
  Scalar radius = std::max<Scalar>(1.0, m.dist(x, y) + unorm / std::max<Scalar>(lbar, 1e-12));
  const Scalar tol = 1e-10 * std::max<Scalar>(1.0, std::abs(model_value(y)));
  const Scalar mu_model = lbar + g.strong_convexity - unorm * std::sqrt(std::abs(kmin));

  Point best = y;
  Scalar best_cert = std::numeric_limits<Scalar>::infinity();
  const int budget = 10000;
  for (int k = 0;; ++k) {
    radius = std::max(radius, m.dist(x, y));
    const Scalar l_model =
        zeta(2 * radius, kmin) * (lbar + g.smoothness) + unorm * std::sqrt(std::abs(kmin));
    const Vec gy = model_grad(y);
    check_finite(gy, "crgd_step inner", k);

    Scalar cert = set.support_gap(y, {y, (-gy).eval()});
    if (mu_model > 0) {
      cert = std::min(cert, m.inner({y, gy}, {y, gy}) / (2 * mu_model));
    }
    if (cert < best_cert) {
      best_cert = cert;
      best = y;
    }
    if (cert <= tol || m.norm({y, gy}) <= kZeroGrad) return y;
    if (k >= budget) {
      SubsolverReport r;
      r.iterations = k;
      r.certificate = best_cert;
      throw SolverBudgetError("crgd_step: inner solve did not reach tolerance", best, r);
    }
    y = set.project(m.exp(y, (-1.0 / l_model) * TangentVector{y, gy}));
  }
}

SolveResult crgd(const Manifold& m, const ObjectiveOracle& f, const ObjectiveOracle& g,
                 const ConstraintSet& set, const Point& x0, const StoppingRule& rule) {
  if (!(f.smoothness > 0)) throw std::invalid_argument("crgd: f must declare smoothness > 0");
  const Scalar lbar = rule.step_size ? 1.0 / *rule.step_size : f.smoothness;
  const Scalar mu = f.strong_convexity + g.strong_convexity;

  Point x = set.project(x0);
  SubsolverReport report;
#ifndef NDEBUG
  Scalar prev_value = f.value(x) + g.value(x);
#endif
  for (int k = 0;; ++k) {
    report.iterations = k;
    if (rule.mode == StopMode::fixed_iterations && k >= rule.budget) return {x, report};

    const Vec fg = f.gradient(x);
    ++report.gradient_calls;
    check_finite(fg, "crgd", k);
    const Vec full = fg + g.gradient(x);
    const Scalar gnorm = m.norm({x, full});
    report.final_grad_norm = gnorm;

    if (rule.mode == StopMode::grad_norm) {
      report.certificate = gnorm;
      if (gnorm <= rule.epsilon) return {x, report};
    } else if (rule.mode == StopMode::epsilon_certificate) {
      report.certificate = std::min(
          report.certificate,
          generic_certificate(m, &set, x, full, mu,
                              f.weak_convexity_deficit + g.weak_convexity_deficit));
      if (report.certificate <= rule.epsilon) return {x, report};
    }
    if (gnorm <= kZeroGrad && rule.mode != StopMode::fixed_iterations) {
      report.certificate = 0;
      return {x, report};
    }
    if (rule.mode != StopMode::fixed_iterations && k >= rule.budget) {
      throw SolverBudgetError("crgd: budget exhausted", x, report);
    }

    ObjectiveOracle frozen = f;
    frozen.gradient = [fg](const Point&) { return fg; };
    x = crgd_step(m, frozen, g, set, x, lbar);
#ifndef NDEBUG
    const Scalar value = f.value(x) + g.value(x);
    assert(value <= prev_value + 1e-9 * (1 + std::abs(prev_value)));
    prev_value = value;
#endif
  }
}

ProxMethod parse_prox_method(const std::string& name) {
  if (name == "prgd") return ProxMethod::prgd;
  if (name == "crgd") return ProxMethod::crgd;
  if (name == "rgd") return ProxMethod::rgd;
  throw std::invalid_argument("unknown subsolver '" + name + "' (expected prgd|crgd|rgd)");
}

std::string to_string(ProxMethod method) {
  switch (method) {
    case ProxMethod::prgd: return "prgd";
    case ProxMethod::crgd: return "crgd";
    case ProxMethod::rgd: return "rgd";
  }
  return "?";
}

namespace {

struct ProxContext {
  const Manifold& m;
  const ProxSubproblem& sub;
  long gradient_calls = 0;

  // grad F(x) = grad loss(x) - (1/eta) log_x(center)
  Vec grad(const Point& x) {
    ++gradient_calls;
    return (sub.loss.gradient(x) - (1.0 / sub.eta) * m.log(x, sub.center).coords).eval();
  }
  // loss-gradient norm recovered from the composite gradient, no oracle call
  Scalar loss_grad_norm(const Point& x, const Vec& grad_f) const {
    const Vec lg = grad_f + (1.0 / sub.eta) * m.log(x, sub.center).coords;
    return m.norm({x, lg});
  }
};

SolveResult prox_prgd(const Manifold& m, const ProxSubproblem& sub, const PrecisionFn& eps_fn,
                      int budget) {
  const Scalar eta = sub.eta;
  const Scalar L = sub.loss.smoothness;
  const Scalar kmin = m.kappa_min();
  const auto diam = sub.set->diameter();

  ProxContext ctx{m, sub};
  Point x = sub.set->project(sub.center);
  Vec g = ctx.grad(x);
  check_finite(g, "solve_prox_certified[prgd]", 0);

  Scalar running_radius = 1e-3;
  Scalar zd = zeta(diam ? *diam : running_radius, kmin);
  Scalar lbar = L + zd / eta;
  Scalar cert = 0.5 * lbar * zeta(m.norm({x, g}) / lbar, kmin);

  SubsolverReport report;
  for (int k = 0;; ++k) {
    const Scalar gnorm = m.norm({x, g});
    report.iterations = k;
    report.final_grad_norm = gnorm;
    report.certificate = cert;
    report.gradient_calls = ctx.gradient_calls;

    const Scalar eps_now = eps_fn(ctx.loss_grad_norm(x, g), m.dist(sub.center, x));
    if (cert <= eps_now || gnorm <= kZeroGrad) {
      if (gnorm <= kZeroGrad) report.certificate = 0;
      return {x, report};
    }
    if (k >= budget) {
      throw SolverBudgetError("solve_prox_certified[prgd]: budget exhausted", x, report);
    }

    // fold this iterate's contraction factor into the running product; the
    // first step is covered by the warm-start constant alone
    if (k >= 1) {
      const Scalar kappa = L * eta + zd;
      cert *= 1.0 - 1.0 / (4.0 * kappa * zeta(gnorm / lbar, kmin));
    }
    x = sub.set->project(m.exp(x, (-1.0 / lbar) * TangentVector{x, g}));
    g = ctx.grad(x);
    check_finite(g, "solve_prox_certified[prgd]", k + 1);

    if (!diam) {
      running_radius = std::max(running_radius, m.dist(sub.center, x));
      zd = zeta(running_radius, kmin);
      lbar = L + zd / eta;
    }
  }
}

SolveResult prox_crgd(const Manifold& m, const ProxSubproblem& sub, const PrecisionFn& eps_fn,
                      int budget) {
  const Scalar eta = sub.eta;
  const Scalar L = sub.loss.smoothness;
  const auto diam = sub.set->diameter();
  const Scalar working_radius = diam ? *diam : 8.0;
  const ObjectiveOracle regularizer = distance_regularizer(m, sub.center, 1.0 / eta,
                                                           working_radius);

  SubsolverReport report;
  Point x = sub.set->project(sub.center);

  if (L <= 0) {  // zero loss: the center is the exact minimizer
    report.certificate = 0;
    report.final_grad_norm = 0;
    return {x, report};
  }

  const Scalar rho = std::min(1.0 / (4.0 * L * eta), 0.5);
  for (int k = 0;; ++k) {
    const Scalar cert = 0.5 * L * std::exp(-(std::max(k, 1) - 1) * rho);
    report.iterations = k;
    report.certificate = cert;

    const Vec lg = sub.loss.gradient(x);
    ++report.gradient_calls;
    check_finite(lg, "solve_prox_certified[crgd]", k);
    const Scalar eps_now = eps_fn(m.norm({x, lg}), m.dist(sub.center, x));
    if (cert <= eps_now) {
      report.final_grad_norm = m.norm({x, (lg + regularizer.gradient(x)).eval()});
      return {x, report};
    }
    if (k >= budget) {
      throw SolverBudgetError("solve_prox_certified[crgd]: budget exhausted", x, report);
    }

    ObjectiveOracle frozen = sub.loss;
    frozen.gradient = [lg](const Point&) { return lg; };
    x = crgd_step(m, frozen, regularizer, *sub.set, x, L);
  }
}

SolveResult prox_rgd(const Manifold& m, const ProxSubproblem& sub, const PrecisionFn& eps_fn,
                     int budget) {
  if (sub.set->diameter()) {
    throw std::invalid_argument(
        "solve_prox_certified[rgd]: the gradient-norm criterion applies to unconstrained "
        "subproblems only");
  }
  const Scalar eta = sub.eta;
  const Scalar L = sub.loss.smoothness;
  const Scalar kmin = m.kappa_min();

  ProxContext ctx{m, sub};
  Point x = sub.center;
  Vec g = ctx.grad(x);
  check_finite(g, "solve_prox_certified[rgd]", 0);

  Scalar running_radius = 1e-3;
  SubsolverReport report;
  for (int k = 0;; ++k) {
    const Scalar gnorm = m.norm({x, g});
    const Scalar gnorm2 = gnorm * gnorm;
    report.iterations = k;
    report.final_grad_norm = gnorm;
    report.gradient_calls = ctx.gradient_calls;

    const Scalar d0 = m.dist(sub.center, x);
    const Scalar eps_now = eps_fn(ctx.loss_grad_norm(x, g), d0);
    const Scalar threshold = eps_now * d0 * d0 / (eta + 2 * eta * eta * eps_now);
    if (threshold > 0) {
      report.certificate = eps_now * gnorm2 / threshold;
    } else {
      report.certificate =
          gnorm <= kZeroGrad ? 0 : std::numeric_limits<Scalar>::infinity();
    }
    if (gnorm <= kZeroGrad || (threshold > 0 && gnorm2 <= threshold)) {
      return {x, report};
    }
    if (k >= budget) {
      throw SolverBudgetError("solve_prox_certified[rgd]: budget exhausted", x, report);
    }

    running_radius = std::max(running_radius, d0);
    const Scalar lbar = L + zeta(running_radius, kmin) / eta;
    x = m.exp(x, (-1.0 / lbar) * TangentVector{x, g});
    g = ctx.grad(x);
    check_finite(g, "solve_prox_certified[rgd]", k + 1);
  }
}

}  // namespace

SolveResult solve_prox_certified(const Manifold& m, const ProxSubproblem& sub,
                                 const PrecisionFn& eps_fn, ProxMethod method, int budget) {
  if (!(sub.eta > 0)) throw std::invalid_argument("solve_prox_certified: eta must be positive");
  if (!sub.set) throw std::invalid_argument("solve_prox_certified: missing constraint set");
  switch (method) {
    case ProxMethod::prgd: return prox_prgd(m, sub, eps_fn, budget);
    case ProxMethod::crgd: return prox_crgd(m, sub, eps_fn, budget);
    case ProxMethod::rgd: return prox_rgd(m, sub, eps_fn, budget);
  }
  throw std::logic_error("solve_prox_certified: bad method");
}

SolveResult solve_prox_certified(const Manifold& m, const ProxSubproblem& sub, Scalar eps_t,
                                 ProxMethod method, int budget) {
  if (!(eps_t > 0)) throw std::invalid_argument("solve_prox_certified: eps_t must be positive");
  return solve_prox_certified(
      m, sub, [eps_t](Scalar, Scalar) { return eps_t; }, method, budget);
}

}  // namespace riopt
