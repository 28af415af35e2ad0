// Explicit time stepping for d_t phi + u . grad phi = lap phi - W'(phi) / eps^2.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actx/measures.hpp"
#include "actx/scenario.hpp"
#include "actx/state.hpp"

namespace actx {

enum class Scheme { kEuler, kRK2 };

struct SolverConfig {
  Scheme scheme = Scheme::kEuler;
  double cfl = 0.5;     // c_s in (0, 1]
  Index diag_every = 50;
  /// Snapshot period in steps; 0 writes only the initial and final states.
  Index snapshot_every = 0;
  std::optional<std::filesystem::path> snapshot_dir;
  /// Record energy and weighted energy after every step.
  bool track_steps = false;
  /// Keep fields on the diagnostics schedule, optionally only inside [frame_from, frame_to].
  bool keep_frames = true;
  std::optional<double> frame_from;
  std::optional<double> frame_to;
  /// Compute the density-ratio lattice on every diagnostics row.
  bool density_rows = true;
  std::optional<HuiskenProbe> probe;
};

/// c_s min(h^2 / (4n), eps^2 / W''max, h / (2 max(u_max, 1e-12))), W''max over |s| <= 1.1.
double stable_dt(double h, double eps, double u_max, const DoubleWell& well, int dim, double cfl = 0.5);

/// Raised when phi turns non-finite or leaves [-1.1, 1.1].
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, Index step, Index node, const Point& where)
      : std::runtime_error(what), step_(step), node_(node), where_(where) {}
  Index step() const { return step_; }
  Index node() const { return node_; }
  const Point& where() const { return where_; }

 private:
  Index step_;
  Index node_;
  Point where_;
};

/// lap phi - W'(phi) / eps^2 - u . grad phi in one pass over interior nodes;
/// boundary entries are zero (those nodes are pinned). `u` may be null.
void fused_rhs(const ScalarField& phi, const VectorField* u, double eps, const DoubleWell& well,
               Eigen::ArrayXd& out);

/// The same right-hand side assembled from laplacian, gradient and advection_term.
ScalarField composite_rhs(const ScalarField& phi, const VectorField* u, double eps, const DoubleWell& well,
                          std::optional<double> boundary_value);

/// Advances one scenario. Static transport fields are sampled once.
class Integrator {
 public:
  Integrator(const ScenarioConfig& cfg, Scheme scheme);
  /// One step of size dt; throws SolverAbort on instability.
  SimState step(const SimState& state, double dt);
  void step_in_place(SimState& state, double dt);

 private:
  const VectorField* velocity(double t);
  void pin(Eigen::ArrayXd& values) const;
  void check(const SimState& state) const;

  const ScenarioConfig& cfg_;
  Scheme scheme_;
  std::vector<Index> boundary_;
  std::optional<VectorField> u_;
  std::optional<double> u_time_;
  std::optional<VectorField> u_unit_;  // x - x0 for the modulated entry
  Eigen::ArrayXd k1_;
  Eigen::ArrayXd k2_;
  ScalarField mid_;
  ScalarField next_;
};

SimState step(const SimState& state, const ScenarioConfig& cfg, double dt, Scheme scheme = Scheme::kEuler);

struct RunResult {
  Trajectory trajectory;
  std::vector<DiagnosticsRow> rows;
  SimState final_state;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> snapshots;
  TransportBounds bounds;  // worst over the run
  bool aborted = false;
  std::string abort_message;
  Index steps = 0;
  double dt = 0.0;
  double max_abs_phi = 0.0;
};

/// Integrates 0 -> T. Throws ConfigError on invalid input; a solver abort is
/// returned in the result together with everything recorded up to that point.
RunResult run(const ScenarioConfig& cfg, const SolverConfig& solver);

}  // namespace actx
