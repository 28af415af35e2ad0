#include "actx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "actx/interface.hpp"

namespace actx {

namespace {

// |grad phi|^2 per node.
Eigen::ArrayXd grad_squared(const ScalarField& phi, std::optional<double> bv) {
  return gradient_squared(phi, bv).values;
}

Eigen::ArrayXd well_values(const ScalarField& phi, const DoubleWell& well) {
  return phi.values.unaryExpr([&well](double s) { return well.w(s); });
}

// Calls fn(node, x) for every node with |x - c| < r, clipped to the grid.
template <typename Fn>
void for_each_in_ball(const GridSpec& s, const Point& c, double r, Fn&& fn) {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  for (int a = 0; a < s.dim(); ++a) {
    lo[a] = std::max(0, static_cast<int>(std::ceil((c[a] - r - s.lo()[a]) / s.h())));
    hi[a] = std::min(s.cells(a), static_cast<int>(std::floor((c[a] + r - s.lo()[a]) / s.h())));
  }
  const double r2 = r * r;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const Point x = s.node(i, j, k);
        if ((x - c).squaredNorm() < r2) fn(s.index(i, j, k), x);
      }
    }
  }
}

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

// Frames with t in [t0, t1] up to half a frame spacing of rounding.
std::vector<const SimState*> window(const Trajectory& traj, double t0, double t1) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t1)) + 0.5 * traj.dt;
  std::vector<const SimState*> out;
  for (const SimState& f : traj.frames) {
    if (f.t >= t0 - tol && f.t <= t1 + tol) out.push_back(&f);
  }
  return out;
}

template <typename Fn>
double trapezoid(const std::vector<const SimState*>& frames, Fn&& value) {
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double v = value(*frames[i]);
    if (i > 0) acc += 0.5 * (v + prev) * (frames[i]->t - frames[i - 1]->t);
    prev = v;
  }
  return acc;
}

// Ball masses at every lattice radius around one center, in a single sweep.
void ball_masses(const ScalarField& f, const Point& c, const std::vector<double>& radii,
                 std::vector<double>& out) {
  out.assign(radii.size(), 0.0);
  const GridSpec& s = f.spec;
  for_each_in_ball(s, c, radii.back(), [&](Index n, const Point& x) {
    const double d = (x - c).norm();
    const auto it = std::upper_bound(radii.begin(), radii.end(), d);
    if (it != radii.end()) out[static_cast<std::size_t>(it - radii.begin())] += f.values[n];
  });
  for (std::size_t k = 1; k < out.size(); ++k) out[k] += out[k - 1];
  for (double& m : out) m *= s.cell_volume();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

EnergyMeasure energy_measure(const ScalarField& phi, double eps, const DoubleWell& well,
                             std::optional<double> bv) {
  ScalarField density = energy_density(phi, eps, well, bv);
  const double total = integrate(density);
  return {std::move(density), total};
}

ScalarField energy_density(const ScalarField& phi, double eps, const DoubleWell& well,
                           std::optional<double> bv) {
  return ScalarField(phi.spec, 0.5 * eps * grad_squared(phi, bv) + well_values(phi, well) / eps);
}

ScalarField discrepancy_field(const ScalarField& phi, double eps, const DoubleWell& well,
                              std::optional<double> bv) {
  return ScalarField(phi.spec, 0.5 * eps * grad_squared(phi, bv) - well_values(phi, well) / eps);
}

ScalarField velocity_density(const ScalarField& phi, double eps, const DoubleWell& well,
                             std::optional<double> bv) {
  const ScalarField lap = laplacian(phi, bv);
  const Eigen::ArrayXd dw = phi.values.unaryExpr([&well](double s) { return well.dw(s); });
  return ScalarField(phi.spec, eps * (lap.values - dw / (eps * eps)).square());
}

double weighted_energy(const ScalarField& density, const TransportSpec& transport, double t) {
  if (!transport.is_gradient() || transport.is_zero()) return integrate(density);
  const GridSpec& s = density.spec;
  Eigen::ArrayXd w(s.node_count());
  for (Index n = 0; n < s.node_count(); ++n) {
    w[n] = std::exp(-transport.potential(s.node(n), t, s.dim())) * density.values[n];
  }
  return integrate(ScalarField(s, std::move(w)));
}

double region_max(const ScalarField& f, const Box& region) {
  const GridSpec& s = f.spec;
  const double tol = 1e-9 * s.h();
  double m = -std::numeric_limits<double>::infinity();
  for (Index n = 0; n < s.node_count(); ++n) {
    if (region.contains(s.node(n), s.dim(), tol)) m = std::max(m, f.values[n]);
  }
  return m;
}

double probe_scale(const Box& domain, const Box& inner, int dim) {
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) {
    gap = std::min({gap, inner.lo[k] - domain.lo[k], domain.hi[k] - inner.hi[k]});
  }
  return std::min(0.5 * gap, 0.25);
}

BallLattice ball_lattice(const GridSpec& s, const Box& region, double r_max, int stride) {
  BallLattice lat;
  const double tol = 1e-9 * s.h();
  for (int i = 0; i < s.nodes(0); i += stride) {
    for (int j = 0; j < s.nodes(1); j += stride) {
      for (int k = 0; k < s.nodes(2); k += (s.dim() == 3 ? stride : 1)) {
        const Point x = s.node(i, j, k);
        if (region.contains(x, s.dim(), tol)) lat.centers.push_back(x);
      }
    }
  }
  for (double r = 2.0 * s.h(); r <= r_max * (1.0 + 1e-12); r *= 2.0) lat.radii.push_back(r);
  return lat;
}

DensityRatio density_ratio(const ScalarField& density, const BallLattice& lat) {
  if (lat.centers.empty() || lat.radii.empty()) throw std::invalid_argument("density_ratio: empty sample set");
  const GridSpec& s = density.spec;
  if (lat.radii.front() < 2.0 * s.h() * (1.0 - 1e-12)) {
    throw std::invalid_argument("density_ratio: radius " + fmt(lat.radii.front()) + " below 2h");
  }
  const double codim = s.dim() - 1;
  DensityRatio best;
  best.value = -1.0;
  std::vector<double> mass;
  std::vector<double> best_ratios;
  for (const Point& c : lat.centers) {
    ball_masses(density, c, lat.radii, mass);
    for (std::size_t k = 0; k < lat.radii.size(); ++k) {
      const double ratio = mass[k] / std::pow(lat.radii[k], codim);
      if (ratio > best.value) {
        best.value = ratio;
        best.center = c;
        best.radius = lat.radii[k];
        best_ratios.resize(mass.size());
        for (std::size_t m = 0; m < mass.size(); ++m) best_ratios[m] = mass[m] / std::pow(lat.radii[m], codim);
      }
    }
  }
  for (std::size_t k = 1; k < best_ratios.size(); ++k) {
    best.lattice_gap = std::max(best.lattice_gap, std::abs(best_ratios[k] - best_ratios[k - 1]));
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

double scaled_density_ratio(const Trajectory& traj, int stride) {
  const ScenarioConfig& cfg = traj.scenario;
  const GridSpec& s = cfg.grid;
  const Box in = cfg.inner_box();
  const double r_max = 0.5 * probe_scale(s.box(), in, s.dim());
  const BallLattice lat = ball_lattice(s, in, r_max, stride);
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const double codim = s.dim() - 1;
  double best = -1.0;
  std::vector<double> mass;
  for (const SimState& f : traj.frames) {
    if (!(f.t > eps2)) continue;
    const EnergyMeasure mu = energy_measure(f.phi, cfg.epsilon, cfg.well, cfg.stencil_boundary());
    const double parabolic = std::sqrt(f.t - eps2);
    for (const Point& c : lat.centers) {
      const double dist = in.distance_to_boundary(c, s.dim());
      std::vector<double> radii;
      for (double r : lat.radii) {
        if (2.0 * r <= dist) radii.push_back(r);
      }
      if (radii.empty()) continue;
      ball_masses(mu.density, c, radii, mass);
      const double l = std::min(dist, parabolic);
      for (std::size_t k = 0; k < radii.size(); ++k) {
        best = std::max(best, std::pow(l / radii[k], codim) * mass[k]);
      }
    }
  }
  if (best < 0.0) throw std::invalid_argument("scaled_density_ratio: no valid (x, r, t) samples");
  return best;
}

double probe_cutoff(const HuiskenProbe& probe, const Point& x) {
  const double d = (x - probe.y).norm();
  if (d <= probe.r_inner) return 1.0;
  if (d >= probe.r_outer) return 0.0;
  return 1.0 - smoothstep5((d - probe.r_inner) / (probe.r_outer - probe.r_inner));
}

double heat_kernel(const HuiskenProbe& probe, const Point& x, double t, int dim) {
  if (!(t < probe.s)) {
    throw std::invalid_argument("heat_kernel: need t < s, got t=" + fmt(t) + " s=" + fmt(probe.s));
  }
  const double eta = probe_cutoff(probe, x);
  if (eta == 0.0) return 0.0;
  const double tau = probe.s - t;
  const double r2 = (x - probe.y).squaredNorm();
  return std::pow(4.0 * std::numbers::pi * tau, -0.5 * (dim - 1)) * std::exp(-r2 / (4.0 * tau)) * eta;
}

double kernel_integral(const ScalarField& f, const HuiskenProbe& probe, double t) {
  const GridSpec& s = f.spec;
  double acc = 0.0;
  for_each_in_ball(s, probe.y, probe.r_outer, [&](Index n, const Point& x) {
    acc += heat_kernel(probe, x, t, s.dim()) * f.values[n];
  });
  return acc * s.cell_volume();
}

namespace {

struct ProbeFrame {
  double kernel = 0.0;        // int rho~ d mu
  double transport = 0.0;     // 1/2 int rho~ |u|^2 d mu
  double discrepancy = 0.0;   // 1/(2(s-t)) int xi rho~
  double exp_weight = 0.0;    // e^{-1/(128(s-t))} mu(B_{r_outer})
};

ProbeFrame probe_frame(const ScenarioConfig& cfg, const ScalarField& phi, const HuiskenProbe& probe,
                       double t) {
  const GridSpec& s = phi.spec;
  const int dim = s.dim();
  const auto bv = cfg.stencil_boundary();
  const Eigen::ArrayXd g2 = grad_squared(phi, bv);
  const double eps = cfg.epsilon;
  ProbeFrame out;
  double ball = 0.0;
  for_each_in_ball(s, probe.y, probe.r_outer, [&](Index n, const Point& x) {
    const double w = cfg.well.w(phi.values[n]);
    const double e = 0.5 * eps * g2[n] + w / eps;
    const double xi = 0.5 * eps * g2[n] - w / eps;
    const double rho = heat_kernel(probe, x, t, dim);
    out.kernel += rho * e;
    if (!cfg.transport.is_zero()) out.transport += 0.5 * rho * cfg.transport.velocity(x, t, dim).squaredNorm() * e;
    out.discrepancy += rho * xi;
    ball += e;
  });
  const double v = s.cell_volume();
  out.kernel *= v;
  out.transport *= v;
  out.discrepancy *= v / (2.0 * (probe.s - t));
  out.exp_weight = std::exp(-1.0 / (128.0 * (probe.s - t))) * ball * v;
  return out;
}

}  // namespace

MonotonicityReport monotonicity_check(const Trajectory& traj, const HuiskenProbe& probe, double t0,
                                      double t1) {
  const ScenarioConfig& cfg = traj.scenario;
  const double tol = 1e-12 * std::max(1.0, std::abs(t0));
  if (!(t0 >= cfg.tau_value() - tol && t0 < t1 && t1 < probe.s)) {
    throw std::invalid_argument("monotonicity_check: need tau <= t0 < t1 < s, got tau=" +
                                fmt(cfg.tau_value()) + " t0=" + fmt(t0) + " t1=" + fmt(t1) + " s=" +
                                fmt(probe.s));
  }
  const auto frames = window(traj, t0, t1);
  if (frames.size() < 2) throw std::invalid_argument("monotonicity_check: fewer than two frames in [t0, t1]");
  std::vector<ProbeFrame> terms;
  terms.reserve(frames.size());
  for (const SimState* f : frames) terms.push_back(probe_frame(cfg, f->phi, probe, f->t));

  MonotonicityReport r;
  r.t0 = frames.front()->t;
  r.t1 = frames.back()->t;
  r.frames = static_cast<int>(frames.size());
  r.scale = terms.front().kernel;
  r.lhs = terms.back().kernel - terms.front().kernel;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const double dt = frames[i]->t - frames[i - 1]->t;
    r.transport_term += 0.5 * dt * (terms[i].transport + terms[i - 1].transport);
    r.discrepancy_term += 0.5 * dt * (terms[i].discrepancy + terms[i - 1].discrepancy);
    r.exp_term += 0.5 * dt * (terms[i].exp_weight + terms[i - 1].exp_weight);
  }
  r.residual = r.lhs - r.transport_term - r.discrepancy_term;
  r.fitted_c = r.exp_term > 0.0 ? std::max(0.0, r.residual) / r.exp_term : 0.0;
  return r;
}

double positive_discrepancy_ball(const ScalarField& phi, double eps, const DoubleWell& well,
                                 const Point& y, double r, std::optional<double> bv) {
  ScalarField xi = discrepancy_field(phi, eps, well, bv);
  xi.values = xi.values.max(0.0);
  return ball_integrate(xi, y, r);
}

double transport_kernel_integral(const Trajectory& traj, const HuiskenProbe& probe, double t0,
                                 double t1) {
  const ScenarioConfig& cfg = traj.scenario;
  if (cfg.transport.is_zero()) return 0.0;
  const auto frames = window(traj, t0, t1);
  return 2.0 * trapezoid(frames, [&](const SimState& f) {
           return probe_frame(cfg, f.phi, probe, f.t).transport;
         });
}

HatP hat_p(double p, double q, int dim, double margin) {
  check_exponents(p, q, dim);
  const double n = dim;
  if (p < n) return {(2.0 * p * q - 2.0 * p - n * q) / (p * q), false};
  if (p > n) return {(q - 2.0) / q, false};
  return {(q - 2.0) / q - margin, true};
}

double velocity_l2(const Trajectory& traj, const Box& region, double t0, double t1) {
  const ScenarioConfig& cfg = traj.scenario;
  const auto frames = window(traj, t0, t1);
  return trapezoid(frames, [&](const SimState& f) {
    return integrate(velocity_density(f.phi, cfg.epsilon, cfg.well, cfg.stencil_boundary()), region);
  });
}

MeyersZiemerReport meyers_ziemer_check(const ScalarField& density, double constant_k, int trials,
                                       std::uint64_t seed, double a_min, double a_max) {
  MeyersZiemerReport r;
  r.constant_k = constant_k;
  const GridSpec& s = density.spec;
  std::vector<double> cdf(static_cast<std::size_t>(s.node_count()));
  double run = 0.0;
  for (Index n = 0; n < s.node_count(); ++n) {
    run += std::max(0.0, density.values[n]);
    cdf[static_cast<std::size_t>(n)] = run;
  }
  if (!(run > 0.0) || !(constant_k > 0.0)) {
    r.trials = trials;
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box box = s.box();
  for (int trial = 0; trial < trials; ++trial) {
    const double a = a_min + (a_max - a_min) * unit(rng);
    Point c = Point::Zero();
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), unit(rng) * run);
      const Index n = std::min<Index>(static_cast<Index>(it - cdf.begin()), s.node_count() - 1);
      c = s.node(n);
      placed = box.distance_to_boundary(c, s.dim()) >= a;
    }
    if (!placed) continue;
    double num = 0.0;
    double den = 0.0;
    for_each_in_ball(s, c, a, [&](Index n, const Point& x) {
      const double rho2 = (x - c).squaredNorm() / (a * a);
      const double b = 1.0 - rho2;
      num += b * b * density.values[n];
      den += 4.0 * b * std::sqrt(rho2) / a;
    });
    ++r.trials;
    if (den > 0.0) r.max_ratio = std::max(r.max_ratio, std::abs(num) / (constant_k * den));
  }
  return r;
}

GronwallReport gronwall_check(const Trajectory& traj, double delta, double step_slack) {
  const ScenarioConfig& cfg = traj.scenario;
  if (!cfg.transport.is_gradient()) throw std::invalid_argument("gronwall_check: transport is not a gradient field");
  std::vector<std::pair<double, double>> series;
  if (!traj.steps.empty()) {
    for (const StepSample& st : traj.steps) series.emplace_back(st.t, st.weighted_energy);
  } else {
    for (const SimState& f : traj.frames) {
      const EnergyMeasure mu = energy_measure(f.phi, cfg.epsilon, cfg.well, cfg.stencil_boundary());
      series.emplace_back(f.t, weighted_energy(mu.density, cfg.transport, f.t));
    }
  }
  GronwallReport r;
  r.is_static = cfg.transport.is_static();
  r.rate_bound = cfg.transport.max_potential_rate(cfg.grid.box(), cfg.dim(), cfg.T) + delta;
  r.samples = series.size();
  if (series.empty()) return r;
  const double f0 = series.front().second;
  r.max_rate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < series.size(); ++i) {
    const auto [t, f] = series[i];
    if (t > 0.0 && f0 > 0.0 && f > 0.0) r.max_rate = std::max(r.max_rate, std::log(f / f0) / t);
    if (f0 > 0.0) r.max_step_increase = std::max(r.max_step_increase, (f - series[i - 1].second) / f0);
  }
  if (!std::isfinite(r.max_rate)) r.max_rate = 0.0;
  r.rate_ok = r.max_rate <= r.rate_bound;
  r.monotone_ok = !r.is_static || r.max_step_increase <= step_slack;
  return r;
}

const std::vector<std::string>& DiagnosticsRow::columns() {
  static const std::vector<std::string> kColumns{
      "t",          "step",          "energy",     "density_ratio",         "argmax_x",
      "argmax_y",   "argmax_z",      "argmax_radius", "argmax_interface_distance", "sup_xi",
      "sup_xi_pos", "int_xi_pos",    "radius",     "monotonicity_residual", "gronwall_factor",
      "velocity_rate", "sup_eps_grad", "max_abs_phi"};
  return kColumns;
}

std::vector<double> DiagnosticsRow::values() const {
  return {t,          static_cast<double>(step), energy,     density_ratio,
          argmax_center[0], argmax_center[1], argmax_center[2], argmax_radius,
          argmax_interface_distance, sup_xi, sup_xi_pos, int_xi_pos,
          radius,     monotonicity_residual, gronwall_factor, velocity_rate,
          sup_eps_grad, max_abs_phi};
}

DiagnosticsRecorder::DiagnosticsRecorder(const ScenarioConfig& cfg, std::optional<HuiskenProbe> probe,
                                         bool density_rows)
    : cfg_(cfg), probe_(probe), density_rows_(density_rows) {
  if (density_rows_) {
    const Box in = cfg.inner_box();
    const double d = probe_scale(cfg.grid.box(), in, cfg.dim());
    lattice_ = ball_lattice(cfg.grid, in, 0.5 * d);
    if (lattice_.radii.empty() || lattice_.centers.empty()) density_rows_ = false;
  }
}

DiagnosticsRecorder::ProbeTerms DiagnosticsRecorder::probe_terms(const ScalarField& phi, const ScalarField&,
                                                                 double t) const {
  const ProbeFrame f = probe_frame(cfg_, phi, *probe_, t);
  return {t, f.kernel, f.transport + f.discrepancy};
}

DiagnosticsRow DiagnosticsRecorder::record(const SimState& state) {
  const ScenarioConfig& cfg = cfg_;
  const GridSpec& s = cfg.grid;
  const double eps = cfg.epsilon;
  const Box in = cfg.inner_box();
  const auto bv = cfg.stencil_boundary();

  DiagnosticsRow row;
  row.t = state.t;
  row.step = state.step;
  const Eigen::ArrayXd g2 = grad_squared(state.phi, bv);
  const Eigen::ArrayXd w = well_values(state.phi, cfg.well);
  const ScalarField density(s, 0.5 * eps * g2 + w / eps);
  const ScalarField xi(s, 0.5 * eps * g2 - w / eps);
  row.energy = integrate(density);
  row.max_abs_phi = state.phi.values.abs().maxCoeff();

  const double tol = 1e-9 * s.h();
  double sup_xi = -std::numeric_limits<double>::infinity();
  double sup_grad = 0.0;
  for (Index n = 0; n < s.node_count(); ++n) {
    if (!in.contains(s.node(n), s.dim(), tol)) continue;
    sup_xi = std::max(sup_xi, xi.values[n]);
    sup_grad = std::max(sup_grad, eps * std::sqrt(g2[n]));
  }
  row.sup_xi = sup_xi;
  row.sup_xi_pos = std::max(0.0, sup_xi);
  row.sup_eps_grad = sup_grad;
  row.int_xi_pos = integrate(ScalarField(s, xi.values.max(0.0)), in);
  row.velocity_rate = integrate(velocity_density(state.phi, eps, cfg.well, bv), in);

  const InterfaceSet iface = extract_interface(state.phi);
  if (density_rows_) {
    const DensityRatio dr = density_ratio(density, lattice_);
    row.density_ratio = dr.value;
    row.argmax_center = dr.center;
    row.argmax_radius = dr.radius;
    if (!iface.empty()) row.argmax_interface_distance = distance_to_interface(dr.center, iface);
  }
  if (const auto ball = cfg.shape.as_ball(); ball && !iface.empty()) {
    row.radius = radius_estimate(iface, ball->center).mean;
  }

  const double f = weighted_energy(density, cfg.transport, state.t);
  if (!f0_) f0_ = f;
  row.gronwall_factor = *f0_ > 0.0 ? f / *f0_ : 1.0;

  if (probe_ && state.t >= cfg.tau_value() && state.t < probe_->s) {
    const ProbeTerms now = probe_terms(state.phi, density, state.t);
    if (last_) residual_ += (now.kernel - last_->kernel) - 0.5 * (now.t - last_->t) * (now.rhs + last_->rhs);
    last_ = now;
  }
  row.monotonicity_residual = residual_;
  return row;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  const auto& cols = DiagnosticsRow::columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const DiagnosticsRow& r : rows) {
    const auto v = r.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      if (i == 1) {
        os << r.step;
      } else {
        os << fmt(v[i]);
      }
    }
    os << '\n';
  }
}

DiagnosticsTable read_diagnostics_csv(std::istream& is) {
  DiagnosticsTable table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("diagnostics: missing header");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++row;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const std::size_t col = values.size();
      const std::string name = col < table.header.size() ? table.header[col] : std::to_string(col + 1);
      if (end == cell.c_str() || *end != '\0') {
        throw std::runtime_error("diagnostics: row " + std::to_string(row) + ", column " + name +
                                 ": malformed value '" + cell + "'");
      }
      if (!std::isfinite(v)) {
        throw std::runtime_error("diagnostics: row " + std::to_string(row) + ", column " + name +
                                 ": non-finite value");
      }
      values.push_back(v);
    }
    if (values.size() != table.header.size()) {
      throw std::runtime_error("diagnostics: row " + std::to_string(row) + " has " +
                               std::to_string(values.size()) + " columns, header has " +
                               std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

}  // namespace actx
