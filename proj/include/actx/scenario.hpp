// Scenario setup: initial phase from a shape, cutoff, and the transport field.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "actx/grid.hpp"
#include "actx/potential.hpp"
#include "actx/shape.hpp"

namespace actx {

/// Raised for invalid scenario parameters. Callers map it to exit status 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TransportKind { kNone, kConstant, kRotation, kQuadratic, kModulated };

/// Catalog of analytic transport fields.
///
///   (none)                      u = 0
///   (constant vx vy [vz])       u = v,                     g = v . x
///   (rotation w [cx cy])        u = w (x2 - c2, -(x1 - c1)), no potential
///   (quadratic c x0..)          g = c |x - x0|^2 / 2
///   (modulated c a w x0..)      g = c (1 + a sin(w t)) |x - x0|^2 / 2
///
/// Gradient entries evaluate u = grad g in closed form.
struct TransportSpec {
  TransportKind kind = TransportKind::kNone;
  Point vector = Point::Zero();  // constant velocity
  Point center = Point::Zero();  // x0 or rotation center
  double strength = 0.0;         // c, or w for rotation
  double amplitude = 0.0;        // a
  double frequency = 0.0;        // w for modulated

  static TransportSpec none() { return {}; }
  static TransportSpec constant(const Point& v);
  static TransportSpec rotation(double omega, const Point& center = Point::Zero());
  static TransportSpec quadratic(double c, const Point& x0 = Point::Zero());
  static TransportSpec modulated(double c, double a, double omega, const Point& x0 = Point::Zero());
  /// Throws ConfigError on an unknown catalog id or wrong arity.
  static TransportSpec parse(std::string_view text, int dim);
  std::string to_sexpr(int dim) const;

  bool is_zero() const { return kind == TransportKind::kNone; }
  bool is_gradient() const { return kind != TransportKind::kRotation; }
  bool is_static() const { return kind != TransportKind::kModulated; }
  /// c for the radial entries (the coefficient of |x - x0|^2 / 2 at time t).
  double radial_coefficient(double t) const;

  Point velocity(const Point& x, double t, int dim) const;
  /// Jacobian du_i/dx_j (upper dim x dim block).
  Eigen::Matrix3d jacobian(const Point& x, double t, int dim) const;
  /// g(x, t); throws std::logic_error for rotation.
  double potential(const Point& x, double t, int dim) const;
  double potential_rate(const Point& x, double t, int dim) const;
  /// sup over the box and [0, T] of |d/dt g|.
  double max_potential_rate(const Box& box, int dim, double T) const;
  /// sup over the box and [0, T] of |u|.
  double max_speed(const Box& box, int dim, double T) const;
};

enum class CutoffKind { kQuintic, kNone };
/// Boundary nodes are pinned either to boundary_value or to their initial values.
enum class BoundaryMode { kDirichlet, kInitial };

struct ScenarioConfig {
  GridSpec grid;
  Shape shape;
  TransportSpec transport;
  DoubleWell well = DoubleWell::quartic();
  double epsilon = 0.0;
  double beta = 0.25;
  std::optional<double> tau;  // default 4 eps^2
  double T = 0.0;
  std::optional<Box> inner;   // Omega', default: box inset by 20% of its width per side
  std::optional<Box> outer;   // Omega'', default: inset by 10%
  double p = 2.0;
  double q = 4.0;
  std::optional<double> lambda0;     // cap on the transport norm
  std::optional<double> energy_cap;  // cap on sup_t mu_t(Omega)
  CutoffKind cutoff = CutoffKind::kQuintic;
  BoundaryMode boundary = BoundaryMode::kDirichlet;
  double boundary_value = -1.0;

  int dim() const { return grid.dim(); }
  double tau_value() const { return tau ? *tau : 4.0 * epsilon * epsilon; }
  Box inner_box() const;
  Box outer_box() const;
  /// Ghost value used by stencils: boundary_value in Dirichlet mode, none otherwise.
  std::optional<double> stencil_boundary() const;
  /// Throws ConfigError naming the violated condition.
  void validate() const;
};

/// Throws ConfigError when p, q violate q > 2, p > nq / (2(q - 1)), p >= 4/3 (n = 2).
void check_exponents(double p, double q, int dim);

inline double signed_distance(const Shape& shape, const Point& x) { return shape.signed_distance(x); }

/// Cutoff l: 1 on Omega', 0 off Omega'', product of per-axis C2 quintic ramps between.
double cutoff_value(const ScenarioConfig& cfg, const Point& x);

/// phi0 = l Psi(-d / eps) + l - 1, so phi0 = +1 inside the shape.
/// Throws ConfigError when the shape comes within 4 eps of Omega''.
ScalarField build_initial_phase(const ScenarioConfig& cfg);

struct TransportBounds {
  double sup_u = 0.0;
  double sup_grad_u = 0.0;  // Frobenius norm of the Jacobian
  double limit_u = 0.0;     // eps^-beta
  double limit_grad_u = 0.0;  // eps^-(beta + 1)
  bool ok() const { return sup_u <= limit_u && sup_grad_u <= limit_grad_u; }
};

struct TransportSample {
  VectorField u;
  TransportBounds bounds;
};

/// Samples u at time t. Bound violations are recorded, not clamped.
TransportSample build_transport(const ScenarioConfig& cfg, double t);

/// ||u||_{L^q(0,T; W^{1,p}(Omega))}: trapezoid in time over >= 64 intervals of
/// (int |u|^p + |grad u|^p)^{1/p}.
double transport_norm(const ScenarioConfig& cfg, int time_samples = 64);

}  // namespace actx
