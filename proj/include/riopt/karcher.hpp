#pragma once

#include <filesystem>

#include "riopt/rioda.hpp"
#include "riopt/rng.hpp"

namespace riopt {

/// Robust Karcher mean instance: anchors at geodesic distance exactly 1 from
/// a random base point, adversarial perturbations confined to balls of radius
/// rbar around the anchors, robustness weight gamma = zeta_{1+rbar}.
struct KarcherInstance {
  ManifoldPtr manifold;
  int n = 0;
  Point base;                  // y-bar
  std::vector<Point> anchors;  // y_i
  Scalar rbar = 0.01;
  Scalar gamma = 0;
  std::uint64_t seed = 0;

  Scalar dbar() const { return 1.0 + rbar; }
};

KarcherInstance generate_karcher_instance(ManifoldPtr m, int n, Scalar rbar, std::uint64_t seed);

std::shared_ptr<const ProductManifold> karcher_y_manifold(const KarcherInstance& inst);
ConstraintSetPtr karcher_x_set(const KarcherInstance& inst);  // B(base, 1 + rbar)
std::shared_ptr<const ProductSet> karcher_y_set(const KarcherInstance& inst);

/// F(x, (y~_i)) = (1/n) sum d(x, y~_i)^2 - (gamma/n) sum d(y_i, y~_i)^2 over
/// M x M^n. Declared smoothness 2 zeta_{dbar} max(1, gamma); declared SCSC
/// modulus min(1, gamma - zeta_{dbar}) clipped at 0.
SaddleOracle robust_karcher_oracle(const KarcherInstance& inst);

/// Minimizer of the weighted average squared distance, solved by gradient
/// descent to gradient norm 1e-9. Uniform weights when empty.
Point karcher_mean(const Manifold& m, const std::vector<Point>& points,
                   std::vector<Scalar> weights = {});

/// Round-trippable plain-text instance file (shortest-representation floats).
void save_karcher_instance(const KarcherInstance& inst, const std::filesystem::path& path);
KarcherInstance load_karcher_instance(const std::filesystem::path& path);

struct ExperimentConfig {
  int iterations = 1000;
  int inner_steps = 3;  // PRGD steps per prox subroutine (4 solves per round)
  std::vector<Scalar> lambda_grid{1e-1, 1e-2, 1e-3};
  std::vector<Scalar> eta_grid{1e-1, 1e-2};
  std::optional<Scalar> lambda;  // single-combination run when set
  std::optional<Scalar> eta;
  int gap_cadence = 10;
  Scalar gap_inner_tol = 1e-9;
};

struct ExperimentRun {
  Scalar lambda = 0;
  Scalar eta = 0;
  ConvergenceTrace trace;
  Scalar initial_gap = 0;
  Scalar final_gap = 0;
  long gradient_calls = 0;
  std::filesystem::path csv_path;
};

struct ExperimentResult {
  std::vector<ExperimentRun> runs;
  std::size_t best_index = 0;  // lowest final gap
};

/// Runs the min-max driver with a fixed number of PRGD steps per subroutine
/// (so inner_steps * 4 gradient calls per round) for every (lambda, eta) in
/// the grid, or for the single configured pair; emits one duality-gap CSV and
/// one SVG plot per run under outdir.
ExperimentResult run_experiment(const KarcherInstance& inst, const ExperimentConfig& cfg,
                                const std::filesystem::path& outdir);

}  // namespace riopt
