#include "actx/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "actx/sexpr.hpp"

namespace actx {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Largest |x - c|^2 over the box corners.
double max_dist2(const Box& box, const Point& c, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double a = std::max(std::abs(box.lo[k] - c[k]), std::abs(box.hi[k] - c[k]));
    s += a * a;
  }
  return s;
}

double ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace

TransportSpec TransportSpec::constant(const Point& v) {
  TransportSpec s;
  s.kind = TransportKind::kConstant;
  s.vector = v;
  return s;
}

TransportSpec TransportSpec::rotation(double omega, const Point& center) {
  TransportSpec s;
  s.kind = TransportKind::kRotation;
  s.strength = omega;
  s.center = center;
  return s;
}

TransportSpec TransportSpec::quadratic(double c, const Point& x0) {
  TransportSpec s;
  s.kind = TransportKind::kQuadratic;
  s.strength = c;
  s.center = x0;
  return s;
}

TransportSpec TransportSpec::modulated(double c, double a, double omega, const Point& x0) {
  TransportSpec s;
  s.kind = TransportKind::kModulated;
  s.strength = c;
  s.amplitude = a;
  s.frequency = omega;
  s.center = x0;
  return s;
}

TransportSpec TransportSpec::parse(std::string_view text, int dim) {
  SExpr e;
  try {
    e = parse_sexpr(text);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("transport: ") + err.what());
  }
  if (!e.is_list) {
    if (e.atom == "none") return none();
    throw ConfigError("transport: unknown catalog id '" + e.atom + "'");
  }
  if (e.items.empty()) throw ConfigError("transport: empty expression");
  const std::string id = e.head();
  std::vector<double> v;
  try {
    v = e.numbers();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("transport: ") + err.what());
  }
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi) {
      throw ConfigError("transport: (" + id + " ...) takes " + std::to_string(lo) +
                        (hi != lo ? "-" + std::to_string(hi) : "") + " numbers, got " +
                        std::to_string(v.size()));
    }
  };
  const auto point_at = [&](std::size_t at) {
    Point p = Point::Zero();
    for (int k = 0; k < dim && at + k < v.size(); ++k) p[k] = v[at + k];
    return p;
  };
  const std::size_t d = static_cast<std::size_t>(dim);
  if (id == "none") {
    need(0, 0);
    return none();
  }
  if (id == "constant") {
    need(d, d);
    return constant(point_at(0));
  }
  if (id == "rotation") {
    need(1, 1 + d);
    if (v.size() != 1 && v.size() != 1 + d) need(1 + d, 1 + d);
    return rotation(v[0], point_at(1));
  }
  if (id == "quadratic") {
    need(1, 1 + d);
    if (v.size() != 1 && v.size() != 1 + d) need(1 + d, 1 + d);
    return quadratic(v[0], point_at(1));
  }
  if (id == "modulated") {
    need(3, 3 + d);
    if (v.size() != 3 && v.size() != 3 + d) need(3 + d, 3 + d);
    return modulated(v[0], v[1], v[2], point_at(3));
  }
  throw ConfigError("transport: unknown catalog id '" + id + "'");
}

std::string TransportSpec::to_sexpr(int dim) const {
  std::string s;
  const auto coords = [&](const Point& p) {
    for (int k = 0; k < dim; ++k) s += ' ' + fmt(p[k]);
  };
  switch (kind) {
    case TransportKind::kNone:
      return "(none)";
    case TransportKind::kConstant:
      s = "(constant";
      coords(vector);
      break;
    case TransportKind::kRotation:
      s = "(rotation " + fmt(strength);
      coords(center);
      break;
    case TransportKind::kQuadratic:
      s = "(quadratic " + fmt(strength);
      coords(center);
      break;
    case TransportKind::kModulated:
      s = "(modulated " + fmt(strength) + ' ' + fmt(amplitude) + ' ' + fmt(frequency);
      coords(center);
      break;
  }
  return s + ')';
}

double TransportSpec::radial_coefficient(double t) const {
  switch (kind) {
    case TransportKind::kQuadratic:
      return strength;
    case TransportKind::kModulated:
      return strength * (1.0 + amplitude * std::sin(frequency * t));
    default:
      return 0.0;
  }
}

Point TransportSpec::velocity(const Point& x, double t, int dim) const {
  Point u = Point::Zero();
  switch (kind) {
    case TransportKind::kNone:
      break;
    case TransportKind::kConstant:
      u = vector;
      break;
    case TransportKind::kRotation:
      u[0] = strength * (x[1] - center[1]);
      u[1] = -strength * (x[0] - center[0]);
      break;
    case TransportKind::kQuadratic:
    case TransportKind::kModulated:
      u = radial_coefficient(t) * (x - center);
      break;
  }
  for (int k = dim; k < 3; ++k) u[k] = 0.0;
  return u;
}

Eigen::Matrix3d TransportSpec::jacobian(const Point&, double t, int dim) const {
  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  switch (kind) {
    case TransportKind::kNone:
    case TransportKind::kConstant:
      break;
    case TransportKind::kRotation:
      j(0, 1) = strength;
      j(1, 0) = -strength;
      break;
    case TransportKind::kQuadratic:
    case TransportKind::kModulated:
      for (int k = 0; k < dim; ++k) j(k, k) = radial_coefficient(t);
      break;
  }
  return j;
}

double TransportSpec::potential(const Point& x, double t, int dim) const {
  const Point dx = x - center;
  double r2 = 0.0;
  for (int k = 0; k < dim; ++k) r2 += dx[k] * dx[k];
  switch (kind) {
    case TransportKind::kNone:
      return 0.0;
    case TransportKind::kConstant: {
      double g = 0.0;
      for (int k = 0; k < dim; ++k) g += vector[k] * x[k];
      return g;
    }
    case TransportKind::kRotation:
      throw std::logic_error("rotation transport has no potential");
    case TransportKind::kQuadratic:
    case TransportKind::kModulated:
      return 0.5 * radial_coefficient(t) * r2;
  }
  return 0.0;
}

double TransportSpec::potential_rate(const Point& x, double t, int dim) const {
  if (kind != TransportKind::kModulated) {
    if (kind == TransportKind::kRotation) throw std::logic_error("rotation transport has no potential");
    return 0.0;
  }
  const Point dx = x - center;
  double r2 = 0.0;
  for (int k = 0; k < dim; ++k) r2 += dx[k] * dx[k];
  return 0.5 * strength * amplitude * frequency * std::cos(frequency * t) * r2;
}

double TransportSpec::max_potential_rate(const Box& box, int dim, double) const {
  if (kind != TransportKind::kModulated) return 0.0;
  // |cos| attains 1 at t = 0.
  return 0.5 * std::abs(strength * amplitude * frequency) * max_dist2(box, center, dim);
}

double TransportSpec::max_speed(const Box& box, int dim, double) const {
  switch (kind) {
    case TransportKind::kNone:
      return 0.0;
    case TransportKind::kConstant:
      return vector.head(dim).norm();
    case TransportKind::kRotation:
      return std::abs(strength) * std::sqrt(max_dist2(box, center, std::min(dim, 2)));
    case TransportKind::kQuadratic:
      return std::abs(strength) * std::sqrt(max_dist2(box, center, dim));
    case TransportKind::kModulated:
      return std::abs(strength) * (1.0 + std::abs(amplitude)) * std::sqrt(max_dist2(box, center, dim));
  }
  return 0.0;
}

Box ScenarioConfig::inner_box() const {
  if (inner) return *inner;
  const Box b = grid.box();
  return b.inset(0.2 * (b.hi[0] - b.lo[0]), dim());
}

Box ScenarioConfig::outer_box() const {
  if (outer) return *outer;
  const Box b = grid.box();
  return b.inset(0.1 * (b.hi[0] - b.lo[0]), dim());
}

std::optional<double> ScenarioConfig::stencil_boundary() const {
  if (boundary == BoundaryMode::kDirichlet) return boundary_value;
  return std::nullopt;
}

void check_exponents(double p, double q, int dim) {
  const double pmin = dim * q / (2.0 * (q - 1.0));
  if (!(q > 2.0) || !(p > pmin) || (dim == 2 && p < 4.0 / 3.0) || !std::isfinite(p) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "exponent condition violated: need q > 2 and p > nq/(2(q-1))";
    if (dim == 2) os << " and p >= 4/3";
    os << "; got n=" << dim << ", p=" << p << ", q=" << q;
    if (q > 2.0) os << " (nq/(2(q-1)) = " << pmin << ")";
    throw ConfigError(os.str());
  }
}

void ScenarioConfig::validate() const {
  if (grid.dim() != 2 && grid.dim() != 3) throw ConfigError("grid: dim must be 2 or 3");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1), got " + fmt(epsilon));
  if (!(beta > 0.0 && beta < 0.5)) throw ConfigError("beta must lie in (0,1/2), got " + fmt(beta));
  if (!(T >= 0.0)) throw ConfigError("T must be nonnegative, got " + fmt(T));
  if (!(tau_value() < T) && T > 0.0) {
    throw ConfigError("tau must be below T, got tau=" + fmt(tau_value()) + " T=" + fmt(T));
  }
  if (shape.empty()) throw ConfigError("shape is required");
  check_exponents(p, q, dim());
  const Box in = inner_box();
  const Box out = outer_box();
  const Box dom = grid.box();
  for (int k = 0; k < dim(); ++k) {
    if (!(dom.lo[k] <= out.lo[k] && out.lo[k] <= in.lo[k] && in.lo[k] < in.hi[k] && in.hi[k] <= out.hi[k] &&
          out.hi[k] <= dom.hi[k])) {
      throw ConfigError("boxes must nest as inner within outer within the domain");
    }
  }
  if (!well.coefficients().empty() && !validate_conditions(well).pass()) {
    throw ConfigError("potential: structural conditions fail for " + well.describe());
  }
}

double cutoff_value(const ScenarioConfig& cfg, const Point& x) {
  if (cfg.cutoff == CutoffKind::kNone) return 1.0;
  const Box in = cfg.inner_box();
  const Box out = cfg.outer_box();
  double l = 1.0;
  for (int k = 0; k < cfg.dim(); ++k) {
    double r = 1.0;
    if (x[k] < in.lo[k]) {
      const double w = in.lo[k] - out.lo[k];
      r = w > 0.0 ? ramp((x[k] - out.lo[k]) / w) : 0.0;
    } else if (x[k] > in.hi[k]) {
      const double w = out.hi[k] - in.hi[k];
      r = w > 0.0 ? ramp((out.hi[k] - x[k]) / w) : 0.0;
    }
    l *= r;
  }
  return l;
}

ScalarField build_initial_phase(const ScenarioConfig& cfg) {
  const GridSpec& s = cfg.grid;
  const double eps = cfg.epsilon;
  Eigen::ArrayXd d(s.node_count());
  for (Index n = 0; n < s.node_count(); ++n) d[n] = cfg.shape.signed_distance(s.node(n));

  if (cfg.cutoff != CutoffKind::kNone) {
    const Box out = cfg.outer_box();
    double margin = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < s.node_count(); ++n) {
      const Point x = s.node(n);
      bool interior = true;
      for (int k = 0; k < s.dim(); ++k) interior = interior && x[k] > out.lo[k] && x[k] < out.hi[k];
      if (!interior) margin = std::min(margin, d[n]);
    }
    if (margin < 4.0 * eps) {
      throw ConfigError("initial shape is too close to the cutoff region: measured margin " + fmt(margin) +
                        " < 4 eps = " + fmt(4.0 * eps));
    }
  }

  Eigen::ArrayXd phi(s.node_count());
  for (Index n = 0; n < s.node_count(); ++n) {
    const double l = cutoff_value(cfg, s.node(n));
    phi[n] = std::clamp(l * cfg.well.profile(-d[n] / eps) + l - 1.0, -1.0, 1.0);
  }
  return ScalarField(s, std::move(phi));
}

TransportSample build_transport(const ScenarioConfig& cfg, double t) {
  const GridSpec& s = cfg.grid;
  const int dim = s.dim();
  TransportSample out{VectorField::zeros(s), {}};
  out.bounds.limit_u = std::pow(cfg.epsilon, -cfg.beta);
  out.bounds.limit_grad_u = std::pow(cfg.epsilon, -(cfg.beta + 1.0));
  if (cfg.transport.is_zero()) return out;
  for (Index n = 0; n < s.node_count(); ++n) {
    const Point x = s.node(n);
    const Point u = cfg.transport.velocity(x, t, dim);
    for (int k = 0; k < dim; ++k) out.u.values(n, k) = u[k];
    out.bounds.sup_u = std::max(out.bounds.sup_u, u.norm());
    out.bounds.sup_grad_u = std::max(out.bounds.sup_grad_u, cfg.transport.jacobian(x, t, dim).norm());
  }
  return out;
}

double transport_norm(const ScenarioConfig& cfg, int time_samples) {
  check_exponents(cfg.p, cfg.q, cfg.dim());
  if (cfg.transport.is_zero() || cfg.T <= 0.0) return 0.0;
  const GridSpec& s = cfg.grid;
  const int dim = s.dim();
  const int m = std::max(time_samples, 64);
  std::vector<double> space(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = cfg.T * i / m;
    const ScalarField f = ScalarField::sample(s, [&](const Point& x) {
      return std::pow(cfg.transport.velocity(x, t, dim).norm(), cfg.p) +
             std::pow(cfg.transport.jacobian(x, t, dim).norm(), cfg.p);
    });
    space[i] = std::pow(integrate(f), 1.0 / cfg.p);
  }
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) acc += (i == 0 || i == m ? 0.5 : 1.0) * std::pow(space[i], cfg.q);
  return std::pow(acc * cfg.T / m, 1.0 / cfg.q);
}

}  // namespace actx
