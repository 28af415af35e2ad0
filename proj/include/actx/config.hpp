// Flat `key = value` configuration files for runs and sweeps.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "actx/scenario.hpp"
#include "actx/solver.hpp"

namespace actx {

struct RunConfig {
  ScenarioConfig scenario;
  SolverConfig solver;
  std::uint64_t seed = 1;
  std::string text;  // source, echoed into the manifest
};

/// Keys: dim, cells, lo, hi, epsilon, beta, tau, T, p, q, lambda0, energy_cap, shape,
/// transport, potential, alpha, kappa, inner, outer, cutoff, boundary, boundary_value,
/// scheme, cfl, diag_every, snapshot_every, track_steps, density_rows, probe, seed.
/// `#` starts a comment. Throws ConfigError naming the key and line for unknown or
/// malformed entries, and for missing required keys (epsilon, shape, T, cells).
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// "y=0.25,0,s=0.03[,r=0.1]"; r defaults to the scenario's probe scale d.
HuiskenProbe parse_probe(std::string_view text, int dim, double default_radius);

struct SweepPlan {
  std::filesystem::path base;   // run config
  std::vector<double> ladder;   // epsilon in units of h0, e.g. 16 12 8
  double ratio = 8.0;           // epsilon / h on every rung
  int h0_cells = 256;           // h0 = domain width / h0_cells
  std::string text;
};

/// Keys: base, ladder, ratio, h0_cells. Relative `base` paths resolve against the
/// plan's directory. Throws ConfigError when fewer than two rungs are given or a
/// rung would fall below epsilon = 4h.
SweepPlan load_sweep_plan(const std::filesystem::path& path);
SweepPlan parse_sweep_plan(std::string_view text, const std::filesystem::path& dir = {});

}  // namespace actx
