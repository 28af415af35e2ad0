// Diffuse energy measure, discrepancy, density ratios and the inequality checks
// evaluated on fields and trajectories.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "actx/grid.hpp"
#include "actx/potential.hpp"
#include "actx/scenario.hpp"
#include "actx/state.hpp"

namespace actx {

// ---- Field-level densities -------------------------------------------------

struct EnergyMeasure {
  ScalarField density;  // eps |grad phi|^2 / 2 + W(phi) / eps
  double total = 0.0;
};

EnergyMeasure energy_measure(const ScalarField& phi, double eps, const DoubleWell& well,
                             std::optional<double> boundary_value = std::nullopt);
/// The density of energy_measure without the quadrature.
ScalarField energy_density(const ScalarField& phi, double eps, const DoubleWell& well,
                           std::optional<double> boundary_value = std::nullopt);

/// xi = eps |grad phi|^2 / 2 - W(phi) / eps.
ScalarField discrepancy_field(const ScalarField& phi, double eps, const DoubleWell& well,
                              std::optional<double> boundary_value = std::nullopt);

/// eps (lap phi - W'(phi) / eps^2)^2, the integrand of the velocity L2 bound.
ScalarField velocity_density(const ScalarField& phi, double eps, const DoubleWell& well,
                             std::optional<double> boundary_value = std::nullopt);

/// int e^{-g(., t)} d mu; plain mu(Omega) when the transport has no potential.
double weighted_energy(const ScalarField& density, const TransportSpec& transport, double t);

/// Max of f over nodes inside `region` (closed box).
double region_max(const ScalarField& f, const Box& region);

// ---- Density ratios --------------------------------------------------------

struct BallLattice {
  std::vector<Point> centers;
  std::vector<double> radii;  // ascending
};

/// d = min(dist(boundary of the domain, Omega') / 2, 1/4).
double probe_scale(const Box& domain, const Box& inner, int dim);

/// Centers on every `stride`-th node inside `region`, radii 2h, 4h, ... up to r_max.
BallLattice ball_lattice(const GridSpec& spec, const Box& region, double r_max, int stride = 4);

struct DensityRatio {
  double value = 0.0;
  Point center = Point::Zero();
  double radius = 0.0;
  /// Largest jump of the ratio between neighbouring radii at the argmax center:
  /// an estimate of how far the continuous sup can exceed the lattice sup.
  double lattice_gap = 0.0;
};

/// max over the lattice of mu(B_r(x)) / r^{n-1}. Throws on an empty lattice or a
/// radius below 2h.
DensityRatio density_ratio(const ScalarField& density, const BallLattice& lattice);

/// max over frames with t > eps^2, centers in Omega' and radii with B_{2r}(x) in Omega'
/// of l^{n-1} mu_t(B_r(x)) / r^{n-1}, l = min(dist(x, boundary of Omega'), sqrt(t - eps^2)).
double scaled_density_ratio(const Trajectory& traj, int stride = 4);

// ---- Backward heat kernel --------------------------------------------------

struct HuiskenProbe {
  Point y = Point::Zero();
  double s = 0.0;
  double r_inner = 0.0;  // eta = 1 inside
  double r_outer = 0.0;  // eta = 0 outside

  /// Cutoff radii d/2 and d.
  static HuiskenProbe at(const Point& y, double s, double d) { return {y, s, 0.5 * d, d}; }
};

/// Quintic C2 bump: 1 on B_{r_inner}, 0 off B_{r_outer}.
double probe_cutoff(const HuiskenProbe& probe, const Point& x);

/// (4 pi (s - t))^{-(n-1)/2} exp(-|x - y|^2 / (4 (s - t))) eta(x - y).
/// Throws std::invalid_argument for t >= s.
double heat_kernel(const HuiskenProbe& probe, const Point& x, double t, int dim);

/// int rho~ f dx over the probe support.
double kernel_integral(const ScalarField& f, const HuiskenProbe& probe, double t);

struct MonotonicityReport {
  double t0 = 0.0;
  double t1 = 0.0;
  double lhs = 0.0;               // int rho~ d mu_{t1} - int rho~ d mu_{t0}
  double transport_term = 0.0;    // int_{t0}^{t1} 1/2 int rho~ |u|^2 d mu dt
  double discrepancy_term = 0.0;  // int_{t0}^{t1} 1/(2(s-t)) int xi rho~ dx dt
  double exp_term = 0.0;          // int_{t0}^{t1} e^{-1/(128(s-t))} mu_t(B_{r_outer}(y)) dt
  double residual = 0.0;          // lhs - transport_term - discrepancy_term
  double fitted_c = 0.0;          // max(0, residual) / exp_term
  double scale = 0.0;             // int rho~ d mu_{t0}
  int frames = 0;
};

/// Trapezoid in time over the trajectory frames in [t0, t1]. Throws
/// std::invalid_argument unless tau <= t0 < t1 < s and at least two frames apply.
MonotonicityReport monotonicity_check(const Trajectory& traj, const HuiskenProbe& probe, double t0,
                                      double t1);

/// int_{B_r(y)} xi_+ dx.
double positive_discrepancy_ball(const ScalarField& phi, double eps, const DoubleWell& well,
                                 const Point& y, double r,
                                 std::optional<double> boundary_value = std::nullopt);

/// int_{t0}^{t1} int rho~ |u|^2 d mu dt.
double transport_kernel_integral(const Trajectory& traj, const HuiskenProbe& probe, double t0, double t1);

struct HatP {
  double value = 0.0;
  /// Set for p = n, where only an upper bound (q - 2)/q is known and `value`
  /// sits `margin` below it.
  bool ambiguous = false;
};

/// p^ = (2pq - 2p - nq)/(pq) for p < n, (q - 2)/q for p > n, (q - 2)/q - margin for p = n.
/// Throws ConfigError when the exponents violate the admissibility condition.
HatP hat_p(double p, double q, int dim, double margin = 1e-9);

/// int_{t0}^{t1} int_region eps (lap phi - W'/eps^2)^2 dx dt.
double velocity_l2(const Trajectory& traj, const Box& region, double t0, double t1);

struct MeyersZiemerReport {
  double max_ratio = 0.0;  // max |int f d mu| / (K int |grad f| dx)
  double constant_k = 0.0;
  int trials = 0;
};

/// Random bumps f = (1 - |x - c|^2 / a^2)_+^2, centers drawn from the normalized
/// measure, a uniform in [a_min, a_max] and fully inside the domain.
MeyersZiemerReport meyers_ziemer_check(const ScalarField& density, double constant_k, int trials,
                                       std::uint64_t seed, double a_min, double a_max);

struct GronwallReport {
  double max_rate = 0.0;           // max_t log(F(t)/F(0)) / t
  double rate_bound = 0.0;         // sup |d/dt g| + delta
  double max_step_increase = 0.0;  // max_k (F_{k+1} - F_k) / F(0)
  bool is_static = true;
  bool rate_ok = true;
  bool monotone_ok = true;  // static g only
  std::size_t samples = 0;
};

/// Uses per-step samples when the trajectory has them, otherwise the frames.
/// Throws std::invalid_argument when the transport is not a gradient field.
GronwallReport gronwall_check(const Trajectory& traj, double delta = 0.05, double step_slack = 1e-9);

// ---- Time-series diagnostics ------------------------------------------------

struct DiagnosticsRow {
  double t = 0.0;
  Index step = 0;
  double energy = 0.0;
  double density_ratio = 0.0;
  Point argmax_center = Point::Zero();
  double argmax_radius = 0.0;
  double argmax_interface_distance = -1.0;  // -1 without an interface
  double sup_xi = 0.0;                      // over Omega'
  double sup_xi_pos = 0.0;
  double int_xi_pos = 0.0;
  double radius = 0.0;  // mean interface radius for ball shapes, else 0
  double monotonicity_residual = 0.0;  // cumulative, from tau on, for the configured probe
  double gronwall_factor = 1.0;        // F(t) / F(0)
  double velocity_rate = 0.0;          // int_{Omega'} eps (lap phi - W'/eps^2)^2 dx
  double sup_eps_grad = 0.0;           // over Omega'
  double max_abs_phi = 0.0;

  static const std::vector<std::string>& columns();
  std::vector<double> values() const;
};

/// Builds rows along a run, carrying the cumulative quantities.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(const ScenarioConfig& cfg, std::optional<HuiskenProbe> probe, bool density_rows);
  DiagnosticsRow record(const SimState& state);
  /// False when disabled or when no lattice radius fits the inner box.
  bool density_rows() const { return density_rows_; }

 private:
  struct ProbeTerms {
    double t;
    double kernel;
    double rhs;
  };
  ProbeTerms probe_terms(const ScalarField& phi, const ScalarField& density, double t) const;

  const ScenarioConfig& cfg_;
  std::optional<HuiskenProbe> probe_;
  bool density_rows_;
  BallLattice lattice_;
  std::optional<double> f0_;
  std::optional<ProbeTerms> last_;
  double residual_ = 0.0;
};

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows);

/// Parsed CSV, one vector per row in column order.
struct DiagnosticsTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws std::runtime_error naming the first malformed or non-finite row (1-based
/// data row numbers).
DiagnosticsTable read_diagnostics_csv(std::istream& is);

}  // namespace actx
