#include "actx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "actx/snapshot.hpp"

namespace actx {

double stable_dt(double h, double eps, double u_max, const DoubleWell& well, int dim, double cfl) {
  const double diffusive = h * h / (4.0 * dim);
  const double reactive = eps * eps / well.max_abs_d2w(1.1);
  const double advective = h / (2.0 * std::max(u_max, 1e-12));
  return cfl * std::min({diffusive, reactive, advective});
}

namespace {

// Interior sweep of lap phi - W'(phi)/eps^2 - u . grad phi; sink(n, rhs) consumes each value.
template <typename Sink>
void rhs_sweep(const ScalarField& phi, const VectorField* u, double eps, const DoubleWell& well, Sink&& sink) {
  const GridSpec& s = phi.spec;
  const int dim = s.dim();
  const double inv_h2 = 1.0 / (s.h() * s.h());
  const double inv_2h = 0.5 / s.h();
  const double inv_eps2 = 1.0 / (eps * eps);
  const Index s0 = s.stride(0);
  const Index s1 = s.stride(1);
  const double* p = phi.values.data();
  const bool quartic = well.family() == WellFamily::kQuartic;
  const Index nn = s.node_count();
  const double* ux = u ? u->values.data() : nullptr;
  const double* uy = u ? ux + nn : nullptr;
  const double* uz = u && dim == 3 ? ux + 2 * nn : nullptr;
  const auto reaction = [quartic, &well, inv_eps2](double c) {
    return (quartic ? -2.0 * c * (1.0 - c * c) : well.dw(c)) * inv_eps2;
  };
  if (dim == 2) {
#pragma omp parallel for schedule(static)
    for (int i = 1; i < s.cells(0); ++i) {
      const Index row = i * s0;
      for (int j = 1; j < s.cells(1); ++j) {
        const Index n = row + j;
        const double c = p[n];
        const double lap = p[n - s0] + p[n + s0] + p[n - 1] + p[n + 1] - 4.0 * c;
        const double adv = ux ? ux[n] * (p[n + s0] - p[n - s0]) + uy[n] * (p[n + 1] - p[n - 1]) : 0.0;
        sink(n, lap * inv_h2 - reaction(c) - adv * inv_2h);
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 1; i < s.cells(0); ++i) {
    for (int j = 1; j < s.cells(1); ++j) {
      const Index row = i * s0 + j * s1;
      for (int k = 1; k < s.cells(2); ++k) {
        const Index n = row + k;
        const double c = p[n];
        const double lap =
            p[n - s0] + p[n + s0] + p[n - s1] + p[n + s1] + p[n - 1] + p[n + 1] - 6.0 * c;
        const double adv = ux ? ux[n] * (p[n + s0] - p[n - s0]) + uy[n] * (p[n + s1] - p[n - s1]) +
                                    uz[n] * (p[n + 1] - p[n - 1])
                              : 0.0;
        sink(n, lap * inv_h2 - reaction(c) - adv * inv_2h);
      }
    }
  }
}

}  // namespace

void fused_rhs(const ScalarField& phi, const VectorField* u, double eps, const DoubleWell& well,
               Eigen::ArrayXd& out) {
  out.setZero(phi.spec.node_count());
  double* o = out.data();
  rhs_sweep(phi, u, eps, well, [o](Index n, double r) { o[n] = r; });
}

ScalarField composite_rhs(const ScalarField& phi, const VectorField* u, double eps, const DoubleWell& well,
                          std::optional<double> boundary_value) {
  Eigen::ArrayXd r = laplacian(phi, boundary_value).values -
                     phi.values.unaryExpr([&well](double v) { return well.dw(v); }) / (eps * eps);
  if (u) r -= advection_term(*u, phi, boundary_value).values;
  return ScalarField(phi.spec, std::move(r));
}

Integrator::Integrator(const ScenarioConfig& cfg, Scheme scheme) : cfg_(cfg), scheme_(scheme) {
  const GridSpec& s = cfg.grid;
  for (Index n = 0; n < s.node_count(); ++n) {
    if (s.on_boundary(n)) boundary_.push_back(n);
  }
}

const VectorField* Integrator::velocity(double t) {
  if (cfg_.transport.is_zero()) return nullptr;
  if (u_ && (cfg_.transport.is_static() || (u_time_ && *u_time_ == t))) return &*u_;
  if (cfg_.transport.kind == TransportKind::kModulated) {
    // u = c(t) (x - x0): rescale one sampled copy of x - x0.
    if (!u_unit_) {
      u_unit_ = VectorField::sample(cfg_.grid, [&](const Point& x) { return Point(x - cfg_.transport.center); });
      u_ = *u_unit_;
    }
    u_->values = cfg_.transport.radial_coefficient(t) * u_unit_->values;
  } else {
    u_ = build_transport(cfg_, t).u;
  }
  u_time_ = t;
  return &*u_;
}

void Integrator::pin(Eigen::ArrayXd& values) const {
  if (cfg_.boundary != BoundaryMode::kDirichlet) return;
  for (Index n : boundary_) values[n] = cfg_.boundary_value;
}

void Integrator::check(const SimState& state) const {
  // NaN fails the comparison, so this also screens non-finite values.
  if ((state.phi.values.abs() <= 1.1).all()) return;
  const GridSpec& s = state.phi.spec;
  for (Index n = 0; n < state.phi.size(); ++n) {
    const double v = state.phi.values[n];
    if (std::isfinite(v) && std::abs(v) <= 1.1) continue;
    const Point x = s.node(n);
    std::ostringstream os;
    os.precision(6);
    os << "solver abort at step " << state.step << ": phi = " << v << " at node " << n << " (x =";
    for (int k = 0; k < s.dim(); ++k) os << ' ' << x[k];
    os << ")" << (std::isfinite(v) ? ", |phi| > 1.1" : ", non-finite");
    throw SolverAbort(os.str(), state.step, n, x);
  }
}

void Integrator::step_in_place(SimState& state, double dt) {
  const double eps = cfg_.epsilon;
  if (scheme_ == Scheme::kEuler) {
    if (next_.size() != state.phi.size()) next_ = state.phi;
    for (Index n : boundary_) next_.values[n] = state.phi.values[n];
    const double* p = state.phi.values.data();
    double* q = next_.values.data();
    rhs_sweep(state.phi, velocity(state.t), eps, cfg_.well, [p, q, dt](Index n, double r) { q[n] = p[n] + dt * r; });
    state.phi.values.swap(next_.values);
  } else {
    fused_rhs(state.phi, velocity(state.t), eps, cfg_.well, k1_);
    if (mid_.size() != state.phi.size()) mid_ = state.phi;
    mid_.values = state.phi.values + 0.5 * dt * k1_;
    fused_rhs(mid_, velocity(state.t + 0.5 * dt), eps, cfg_.well, k2_);
    state.phi.values += dt * k2_;
  }
  pin(state.phi.values);
  state.step += 1;
  state.t += dt;
  check(state);
}

SimState Integrator::step(const SimState& state, double dt) {
  SimState next = state;
  step_in_place(next, dt);
  return next;
}

SimState step(const SimState& state, const ScenarioConfig& cfg, double dt, Scheme scheme) {
  Integrator integrator(cfg, scheme);
  return integrator.step(state, dt);
}

namespace {

std::filesystem::path write_frame(const std::filesystem::path& dir, const SimState& s) {
  std::ostringstream name;
  name << "step_" << std::string(8 - std::min<std::size_t>(8, std::to_string(s.step).size()), '0') << s.step
       << ".afld";
  const auto path = dir / name.str();
  write_snapshot(path, s.phi, s.t);
  return path;
}

// Per-step energy and weighted energy with the quadrature weights and, for a static
// potential, exp(-g) folded into one cached array.
class StepTracker {
 public:
  explicit StepTracker(const ScenarioConfig& cfg) : cfg_(cfg) {
    const GridSpec& g = cfg.grid;
    weights_.resize(g.node_count());
    half_r2_.resize(g.node_count());
    for (Index n = 0; n < g.node_count(); ++n) {
      const auto idx = g.multi_index(n);
      double w = g.cell_volume();
      for (int a = 0; a < g.dim(); ++a) {
        if (idx[a] == 0 || idx[a] == g.cells(a)) w *= 0.5;
      }
      weights_[n] = w;
      half_r2_[n] = 0.5 * (g.node(n) - cfg.transport.center).head(g.dim()).squaredNorm();
    }
    weighted_ = cfg.transport.is_gradient() && !cfg.transport.is_zero();
    if (weighted_ && cfg.transport.is_static()) {
      Eigen::ArrayXd e(g.node_count());
      for (Index n = 0; n < g.node_count(); ++n) e[n] = std::exp(-cfg.transport.potential(g.node(n), 0.0, g.dim()));
      static_weights_ = weights_ * e;
    }
  }

  StepSample sample(const SimState& s) const {
    const ScalarField e = energy_density(s.phi, cfg_.epsilon, cfg_.well, cfg_.stencil_boundary());
    StepSample out;
    out.step = s.step;
    out.t = s.t;
    out.energy = (e.values * weights_).sum();
    if (!weighted_) {
      out.weighted_energy = out.energy;
    } else if (static_weights_.size() > 0) {
      out.weighted_energy = (e.values * static_weights_).sum();
    } else {
      const double c = cfg_.transport.radial_coefficient(s.t);
      out.weighted_energy = (e.values * weights_ * (-c * half_r2_).exp()).sum();
    }
    out.max_abs_phi = s.phi.values.abs().maxCoeff();
    return out;
  }

 private:
  const ScenarioConfig& cfg_;
  Eigen::ArrayXd weights_;
  Eigen::ArrayXd half_r2_;
  Eigen::ArrayXd static_weights_;
  bool weighted_ = false;
};

}  // namespace

RunResult run(const ScenarioConfig& cfg, const SolverConfig& solver) {
  cfg.validate();
  const GridSpec& g = cfg.grid;
  if (!(solver.cfl > 0.0 && solver.cfl <= 1.0)) throw ConfigError("solver: cfl must lie in (0,1]");
  if (solver.diag_every < 1) throw ConfigError("solver: diag_every must be positive");
  if (cfg.epsilon < 4.0 * g.h() * (1.0 - 1e-12)) {
    throw ConfigError("resolution: epsilon must be at least 4h (epsilon/h = " +
                      std::to_string(cfg.epsilon / g.h()) + ")");
  }

  RunResult result;
  if (cfg.epsilon < 6.0 * g.h()) {
    result.warnings.push_back("resolution: epsilon/h = " + std::to_string(cfg.epsilon / g.h()) + " is below 6");
  }
  result.trajectory.scenario = cfg;
  const ScenarioConfig& scn = result.trajectory.scenario;

  const double u_max = scn.transport.max_speed(g.box(), g.dim(), scn.T);
  const double dt_stable = stable_dt(g.h(), scn.epsilon, u_max, scn.well, g.dim(), solver.cfl);
  const Index steps = scn.T > 0.0 ? static_cast<Index>(std::ceil(scn.T / dt_stable - 1e-9)) : 0;
  const double dt = steps > 0 ? scn.T / static_cast<double>(steps) : 0.0;
  result.dt = dt;
  result.trajectory.dt = dt;

  result.bounds = build_transport(scn, 0.0).bounds;
  if (!scn.transport.is_static()) {
    for (int i = 1; i <= 64; ++i) {
      const TransportBounds b = build_transport(scn, scn.T * i / 64).bounds;
      result.bounds.sup_u = std::max(result.bounds.sup_u, b.sup_u);
      result.bounds.sup_grad_u = std::max(result.bounds.sup_grad_u, b.sup_grad_u);
    }
  }
  if (!result.bounds.ok()) {
    std::ostringstream os;
    os << "transport: sup|u| = " << result.bounds.sup_u << " (limit " << result.bounds.limit_u
       << "), sup|grad u| = " << result.bounds.sup_grad_u << " (limit " << result.bounds.limit_grad_u
       << ") exceed the eps-scaled bounds";
    result.warnings.push_back(os.str());
  }

  SimState state{0.0, build_initial_phase(scn), 0};
  if (scn.boundary == BoundaryMode::kDirichlet) {
    for (Index n = 0; n < g.node_count(); ++n) {
      if (g.on_boundary(n)) state.phi.values[n] = scn.boundary_value;
    }
  }
  if (solver.snapshot_dir) std::filesystem::create_directories(*solver.snapshot_dir);

  Integrator integrator(scn, solver.scheme);
  DiagnosticsRecorder recorder(scn, solver.probe, solver.density_rows);
  if (solver.density_rows && !recorder.density_rows()) {
    result.warnings.push_back("density ratio: no lattice radius fits between 2h and d/2; density columns stay 0");
  }
  std::optional<StepTracker> tracker;
  if (solver.track_steps) tracker.emplace(scn);
  result.max_abs_phi = state.phi.values.abs().maxCoeff();

  const auto keep_frame = [&](double t) {
    if (!solver.keep_frames) return false;
    const double tol = 0.5 * dt;
    if (solver.frame_from && t < *solver.frame_from - tol) return false;
    if (solver.frame_to && t > *solver.frame_to + tol) return false;
    return true;
  };
  const auto observe = [&](const SimState& s) {
    if (s.step % solver.diag_every == 0) {
      result.rows.push_back(recorder.record(s));
      if (keep_frame(s.t)) result.trajectory.frames.push_back(s);
    }
    if (solver.track_steps) result.trajectory.steps.push_back(tracker->sample(s));
    if (solver.snapshot_dir && solver.snapshot_every > 0 && s.step % solver.snapshot_every == 0) {
      result.snapshots.push_back(write_frame(*solver.snapshot_dir, s));
    }
  };

  observe(state);
  if (solver.snapshot_dir && solver.snapshot_every == 0) {
    result.snapshots.push_back(write_frame(*solver.snapshot_dir, state));
  }
  for (Index k = 1; k <= steps; ++k) {
    SimState next = state;
    try {
      integrator.step_in_place(next, dt);
    } catch (const SolverAbort& e) {
      result.aborted = true;
      result.abort_message = e.what();
      break;
    }
    next.t = static_cast<double>(k) * dt;
    state = std::move(next);
    result.max_abs_phi = std::max(result.max_abs_phi, state.phi.values.abs().maxCoeff());
    observe(state);
  }
  result.steps = state.step;
  const bool final_written = !result.snapshots.empty() && solver.snapshot_every > 0 &&
                             state.step % solver.snapshot_every == 0;
  if (solver.snapshot_dir && !final_written && (state.step > 0 || solver.snapshot_every > 0)) {
    result.snapshots.push_back(write_frame(*solver.snapshot_dir, state));
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace actx
