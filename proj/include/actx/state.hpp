// Solver state and recorded trajectories.
#pragma once

#include <vector>

#include "actx/grid.hpp"
#include "actx/scenario.hpp"

namespace actx {

struct SimState {
  double t = 0.0;
  ScalarField phi;
  Index step = 0;
};

/// Per-step scalars, recorded when SolverConfig::track_steps is set.
struct StepSample {
  Index step = 0;
  double t = 0.0;
  double energy = 0.0;           // mu_t(Omega)
  double weighted_energy = 0.0;  // int e^{-g} d mu_t, equal to energy when u is not a gradient
  double max_abs_phi = 0.0;
};

/// Stored fields on the diagnostics schedule. Time integrals over a trajectory use
/// the trapezoid rule on these frames.
struct Trajectory {
  ScenarioConfig scenario;
  std::vector<SimState> frames;
  std::vector<StepSample> steps;
  double dt = 0.0;
};

}  // namespace actx
