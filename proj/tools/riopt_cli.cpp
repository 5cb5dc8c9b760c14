#include <CLI11.hpp>

#include <iostream>

#include "riopt/run_config.hpp"

namespace {

void add_common_flags(CLI::App* cmd, riopt::RunConfig& cfg, std::string& config_path,
                      std::string& emit_path) {
  cmd->add_option("--config", config_path, "flat key = value config file; flags override it");
  cmd->add_option("--emit-config", emit_path, "write the resolved config to this path");
  cmd->add_option("--manifold", cfg.manifold, "{euclidean|hyperbolic|spd}:<dim>");
  cmd->add_option("--n", cfg.n, "number of anchor points");
  cmd->add_option("--iters", cfg.iters, "round count");
  cmd->add_option("--epsilon", [&cfg](const CLI::results_t& r) {
    cfg.epsilon = std::stod(r[0]);
    return true;
  }, "target accuracy (epsilon-targeted mode)");
  cmd->add_option("--eta", [&cfg](const CLI::results_t& r) {
    cfg.eta = std::stod(r[0]);
    return true;
  }, "proximal parameter override");
  cmd->add_option("--lambda", [&cfg](const CLI::results_t& r) {
    cfg.lambda = std::stod(r[0]);
    return true;
  }, "inner PRGD step size (karcher benchmark)");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--out", cfg.out, "output directory");
  cmd->add_option("--gap-cadence", cfg.gap_cadence, "rounds between duality-gap measurements");
  cmd->add_option("--subsolver", cfg.subsolver, "{prgd|crgd|rgd}");
  cmd->add_option("--inner-steps", cfg.inner_steps, "PRGD steps per subroutine (karcher)");
  cmd->add_flag("--paper-scale", cfg.paper_scale, "paper-sized instances (H^5000 / SPD 100, n=50)");
  cmd->add_option("--mu", cfg.mu, "strong convexity of the synthetic minmax problem");
  cmd->add_flag("--constrained,!--unconstrained", cfg.constrained, "minmax constraint handling");
  cmd->add_option("--rbar", cfg.rbar, "karcher constraint ball radius");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian optimization toolkit: implicit optimistic online and min-max solvers"};
  app.require_subcommand(1);

  riopt::RunConfig cfg;
  std::string config_path, emit_path;

  for (const std::string name : {"karcher", "online", "minmax", "geomtest"}) {
    auto* cmd = app.add_subcommand(name, name + " run");
    add_common_flags(cmd, cfg, config_path, emit_path);
    cmd->callback([&cfg, name] { cfg.subcommand = name; });
  }

  // first pass just to locate --config so file values load before flags
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--config" && i + 1 < argc) {
      try {
        cfg = riopt::parse_config_file(argv[i + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
      }
    }
  }

  CLI11_PARSE(app, argc, argv);

  if (!emit_path.empty()) {
    try {
      riopt::emit_config(cfg, emit_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << std::endl;
      return 2;
    }
  }
  return riopt::run(cfg);
}
