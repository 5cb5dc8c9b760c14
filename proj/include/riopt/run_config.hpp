#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "riopt/geometry.hpp"

namespace riopt {

/// A fully resolved run: subcommand plus every tunable. Together with the
/// seed this determines the emitted traces byte for byte (wall-clock timing
/// columns aside).
struct RunConfig {
  std::string subcommand;  // karcher | online | minmax | geomtest
  std::string manifold = "hyperbolic:50";
  int n = 10;
  int iters = 1000;
  std::optional<Scalar> epsilon;
  std::optional<Scalar> eta;
  std::optional<Scalar> lambda;
  std::uint64_t seed = 0;
  std::string out = "out";
  int gap_cadence = 10;
  std::string subsolver = "prgd";
  int inner_steps = 3;
  bool paper_scale = false;
  Scalar mu = 0;           // minmax synthetic problems
  bool constrained = true; // minmax
  Scalar rbar = 0.01;      // karcher ball radius

  bool operator==(const RunConfig&) const = default;
};

/// Flat key = value file, '#' comments. Unknown keys and malformed values are
/// rejected with their line number. Keys mirror the CLI flags.
RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Writes a config that parse_config_file reads back equal.
void emit_config(const RunConfig& cfg, const std::filesystem::path& path);

/// Executes the run; returns a process exit code.
int run(const RunConfig& cfg);

}  // namespace riopt
