#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "actx/measures.hpp"
#include "actx/solver.hpp"

using namespace actx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSigma = 4.0 / 3.0;

ScalarField tanh_field(const GridSpec& s, double eps, const Point& normal = make_point(1, 0), double offset = 0.0) {
  return ScalarField::sample(s, [&](const Point& x) { return std::tanh((x.dot(normal) - offset) / eps); });
}

ScalarField circle_field(const GridSpec& s, double r, double eps) {
  return ScalarField::sample(s, [&](const Point& x) { return std::tanh((r - x.head(2).norm()) / eps); });
}

bool interior(const GridSpec& s, Index n, int layers) {
  const auto m = s.multi_index(n);
  for (int k = 0; k < s.dim(); ++k) {
    if (m[k] < layers || m[k] > s.cells(k) - layers) return false;
  }
  return true;
}

// phi = tanh(x / eps), pinned to its initial values on the boundary.
ScenarioConfig standing_wave(int cells, double ratio, double T, double tau) {
  ScenarioConfig c;
  c.grid = GridSpec::cube(2, -0.5, 0.5, cells);
  c.epsilon = ratio * c.grid.h();
  c.T = T;
  c.tau = tau;
  c.shape = Shape::half_space(make_point(-1, 0), 0.0);
  c.cutoff = CutoffKind::kNone;
  c.boundary = BoundaryMode::kInitial;
  c.inner = Box{make_point(-0.3, -0.3), make_point(0.3, 0.3)};
  c.outer = Box{make_point(-0.4, -0.4), make_point(0.4, 0.4)};
  return c;
}

Trajectory run_frames(const ScenarioConfig& c, Index diag_every) {
  SolverConfig s;
  s.diag_every = diag_every;
  s.density_rows = false;
  RunResult r = run(c, s);
  REQUIRE_FALSE(r.aborted);
  return std::move(r.trajectory);
}

Trajectory constant_frames(const ScenarioConfig& c, double value, std::initializer_list<double> times) {
  Trajectory traj;
  traj.scenario = c;
  traj.dt = 1e-6;
  Index step = 0;
  for (double t : times) traj.frames.push_back(SimState{t, ScalarField::filled(c.grid, value), step++});
  return traj;
}

}  // namespace

TEST_CASE("discrepancy_field examples") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 256);
  const DoubleWell w = DoubleWell::quartic();
  // The central difference leaves about (h/eps)^2/3 of relative error in |grad phi|^2,
  // which crosses 5e-3 just below eps = 8.2h.
  for (double ratio : {10.0, 16.0}) {
    const double eps = ratio * s.h();
    const ScalarField xi = discrepancy_field(tanh_field(s, eps), eps, w);
    double worst = 0.0;
    for (Index n = 0; n < s.node_count(); ++n) {
      if (!interior(s, n, 1)) continue;
      worst = std::max(worst, std::abs(xi[n]));
      // Oracle: the discrete quantity in closed form.
      const double x = s.node(n)[0], h = s.h();
      const double d = (std::tanh((x + h) / eps) - std::tanh((x - h) / eps)) / (2 * h);
      CHECK(xi[n] == doctest::Approx(0.5 * eps * d * d - w.w(std::tanh(x / eps)) / eps).epsilon(1e-10).scale(1.0));
    }
    CHECK(worst <= 5e-3 / eps);
  }

  const double eps = 8 * s.h();
  const ScalarField one = discrepancy_field(ScalarField::filled(s, 1.0), eps, w);
  CHECK((one.values == 0.0).all());
  const ScalarField zero = discrepancy_field(ScalarField::filled(s, 0.0), eps, w);
  CHECK((zero.values == -0.5 / eps).all());
}

TEST_CASE("energy measure total is the integral of its density") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 128);
  const double eps = 8 * s.h();
  const EnergyMeasure mu = energy_measure(tanh_field(s, eps), eps, DoubleWell::quartic());
  CHECK(mu.total == doctest::Approx(integrate(mu.density)).epsilon(1e-14));
  // A straight interface across the unit square carries sigma per unit length.
  CHECK(mu.total == doctest::Approx(kSigma).epsilon(0.02));
}

TEST_CASE("density_ratio on a flat interface is 2 sigma") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 256);
  const double eps = 1.0 / 32;
  const EnergyMeasure mu = energy_measure(tanh_field(s, eps), eps, DoubleWell::quartic());
  const DensityRatio at0 = density_ratio(mu.density, BallLattice{{Point::Zero()}, {0.25}});
  CHECK(at0.value == doctest::Approx(2 * kSigma).epsilon(0.1));
  CHECK(at0.radius == 0.25);

  const DensityRatio sup = density_ratio(mu.density, ball_lattice(s, Box{make_point(-0.25, -0.25), make_point(0.25, 0.25)}, 0.25));
  CHECK(sup.value >= at0.value);
  CHECK(sup.value == doctest::Approx(2 * kSigma).epsilon(0.1));
  CHECK(std::abs(sup.center[0]) <= 2 * eps);
  CHECK(sup.lattice_gap >= 0.0);
}

TEST_CASE("density_ratio on a circle approaches 2 sigma for small balls") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 512);
  const double eps = 1.0 / 64;
  const EnergyMeasure mu = energy_measure(circle_field(s, 0.25, eps), eps, DoubleWell::quartic());
  const DensityRatio r = density_ratio(mu.density, BallLattice{{make_point(0.25, 0.0)}, {0.0625}});
  CHECK(r.value == doctest::Approx(2 * kSigma).epsilon(0.1));
}

TEST_CASE("density_ratio edge cases") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 64);
  const EnergyMeasure mu = energy_measure(ScalarField::filled(s, 1.0), 0.1, DoubleWell::quartic());
  const BallLattice lat = ball_lattice(s, Box{make_point(-0.25, -0.25), make_point(0.25, 0.25)}, 0.25);
  REQUIRE_FALSE(lat.centers.empty());
  CHECK(lat.radii.front() == doctest::Approx(2 * s.h()));
  CHECK(lat.radii.back() <= 0.25);
  CHECK(density_ratio(mu.density, lat).value == 0.0);
  CHECK_THROWS_AS(density_ratio(mu.density, BallLattice{}), std::invalid_argument);
  CHECK_THROWS_AS(density_ratio(mu.density, BallLattice{{Point::Zero()}, {s.h()}}), std::invalid_argument);
}

TEST_CASE("probe_scale caps at 1/4") {
  const Box unit{make_point(0, 0), make_point(1, 1)};
  CHECK(probe_scale(unit, Box{make_point(0.1, 0.1), make_point(0.9, 0.9)}, 2) == doctest::Approx(0.05));
  CHECK(probe_scale(Box{make_point(-2, -2), make_point(2, 2)}, Box{make_point(-1, -1), make_point(1, 1)}, 2) == 0.25);
}

TEST_CASE("scaled_density_ratio of a flat phase is 0") {
  const ScenarioConfig c = standing_wave(64, 8, 0.1, 0.01);
  CHECK(scaled_density_ratio(constant_frames(c, 1.0, {0.05, 0.06})) == 0.0);
  // No frame after eps^2: no samples.
  CHECK_THROWS_AS(scaled_density_ratio(constant_frames(c, 1.0, {0.0})), std::invalid_argument);
}

TEST_CASE("heat_kernel examples") {
  const HuiskenProbe p = HuiskenProbe::at(Point::Zero(), 0.1, 0.25);
  CHECK(p.r_inner == 0.125);
  CHECK(p.r_outer == 0.25);
  for (double gap : {1e-3, 1e-2}) {
    CHECK(heat_kernel(p, Point::Zero(), p.s - gap, 2) == doctest::Approx(1.0 / std::sqrt(4 * kPi * gap)).epsilon(1e-12));
    CHECK(heat_kernel(p, Point::Zero(), p.s - gap, 3) == doctest::Approx(1.0 / (4 * kPi * gap)).epsilon(1e-12));
  }
  CHECK(heat_kernel(p, make_point(0.25, 0.0), 0.09, 2) == 0.0);
  CHECK(heat_kernel(p, make_point(0.2, 0.2), 0.09, 2) == 0.0);
  CHECK(probe_cutoff(p, make_point(0.1, 0.0)) == 1.0);
  CHECK_THROWS_AS(heat_kernel(p, Point::Zero(), 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(heat_kernel(p, Point::Zero(), 0.2, 2), std::invalid_argument);
}

TEST_CASE("heat kernel mass is at most sqrt(4 pi (s - t))") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 512);
  const ScalarField one = ScalarField::filled(s, 1.0);
  const HuiskenProbe p = HuiskenProbe::at(Point::Zero(), 0.1, 0.25);
  for (double gap : {1e-3, 1e-2}) {
    const double bound = std::sqrt(4 * kPi * gap);
    const double mass = kernel_integral(one, p, p.s - gap);
    CHECK(mass <= bound * (1 + 1e-9));
    // Oracle: the untruncated kernel carries sqrt(4 pi gap) (1 - exp(-r^2 / (4 gap))) on B_r,
    // and the cutoff sits between the indicators of B_{r_inner} and B_{r_outer}.
    const auto on_ball = [&](double r) { return bound * (1 - std::exp(-r * r / (4 * gap))); };
    CHECK(mass >= on_ball(p.r_inner) * (1 - 1e-6));
    CHECK(mass <= on_ball(p.r_outer) * (1 + 1e-6));
  }
}

TEST_CASE("property: heat kernel is nonnegative and radially nonincreasing") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-0.3, 0.3), gap(1e-4, 5e-2);
  const HuiskenProbe p = HuiskenProbe::at(make_point(0.05, -0.02), 0.1, 0.25);
  for (int i = 0; i < 200; ++i) {
    const Point x = make_point(u(rng), u(rng));
    const double t = p.s - gap(rng);
    const double k = heat_kernel(p, x, t, 2);
    CHECK(k >= 0.0);
    CHECK(heat_kernel(p, p.y + 0.5 * (x - p.y), t, 2) >= k);
  }
}

TEST_CASE("monotonicity_check on a flat phase is identically zero") {
  const ScenarioConfig c = standing_wave(64, 8, 0.1, 0.01);
  const Trajectory traj = constant_frames(c, 1.0, {0.01, 0.02, 0.03});
  const MonotonicityReport r = monotonicity_check(traj, HuiskenProbe::at(Point::Zero(), 0.05, 0.25), 0.01, 0.03);
  CHECK(r.frames == 3);
  CHECK(r.lhs == 0.0);
  CHECK(r.transport_term == 0.0);
  CHECK(r.discrepancy_term == 0.0);
  CHECK(r.residual == 0.0);
  CHECK(r.fitted_c == 0.0);
}

TEST_CASE("monotonicity_check rejects invalid times") {
  const ScenarioConfig c = standing_wave(64, 8, 0.1, 0.01);
  const Trajectory traj = constant_frames(c, 1.0, {0.01, 0.02, 0.03});
  const HuiskenProbe p = HuiskenProbe::at(Point::Zero(), 0.025, 0.25);
  CHECK_THROWS_AS(monotonicity_check(traj, p, 0.005, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(monotonicity_check(traj, p, 0.02, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(monotonicity_check(traj, p, 0.01, 0.03), std::invalid_argument);
  // One frame in the window.
  CHECK_THROWS_AS(monotonicity_check(traj, HuiskenProbe::at(Point::Zero(), 0.5, 0.25), 0.025, 0.028),
                  std::invalid_argument);
}

TEST_CASE("standing wave diagnostics") {
  const ScenarioConfig c = standing_wave(128, 8, 0.01, 0.002);
  const Trajectory traj = run_frames(c, 50);
  REQUIRE(traj.frames.size() >= 5);

  SUBCASE("near-monotone kernel integral") {
    // s - t stays below r_inner^2 / 13, where the cutoff removes under 1% of the kernel mass.
    const HuiskenProbe p = HuiskenProbe::at(Point::Zero(), 0.0105, 0.25);
    REQUIRE(p.s - 0.0095 <= p.r_inner * p.r_inner / 13);
    const MonotonicityReport r = monotonicity_check(traj, p, 0.0095, 0.01);
    CHECK(r.frames >= 3);
    CHECK(r.scale > 0.0);
    CHECK(r.lhs <= 0.01 * r.scale);
    CHECK(std::abs(r.discrepancy_term) <= 0.01 * r.scale);
    CHECK(r.transport_term == 0.0);
  }
  SUBCASE("no transport, no transport integral") {
    CHECK(transport_kernel_integral(traj, HuiskenProbe::at(Point::Zero(), 0.02, 0.25), 0.002, 0.01) == 0.0);
  }
  SUBCASE("velocity L2 is discretization error") {
    const Box in = c.inner_box();
    const double mu_in = integrate(energy_measure(traj.frames.back().phi, c.epsilon, c.well, c.stencil_boundary()).density, in);
    CHECK(velocity_l2(traj, in, 0.002, 0.01) <= 1e-4 * (0.01 - 0.002) * mu_in);
  }
}

TEST_CASE("positive_discrepancy_ball examples") {
  const DoubleWell w = DoubleWell::quartic();
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 256);
  for (double value : {-1.0, 0.0, 0.3, 1.0}) {
    CHECK(positive_discrepancy_ball(ScalarField::filled(s, value), 0.05, w, Point::Zero(), 0.25) == 0.0);
  }
  const double r = 0.25;
  for (double ratio : {8.0, 16.0}) {
    const double eps = ratio * s.h();
    CHECK(positive_discrepancy_ball(tanh_field(s, eps), eps, w, Point::Zero(), r) <= 1e-2 * r);
  }
}

TEST_CASE("transport integral grows linearly for a steady tangential flow") {
  ScenarioConfig c = standing_wave(96, 8, 0.006, 0.002);
  // Tangential to the interface, so u . grad phi = 0 and the profile stays put.
  c.transport = TransportSpec::constant(make_point(0.0, 1.0));
  const Trajectory traj = run_frames(c, 20);
  const HuiskenProbe p = HuiskenProbe::at(Point::Zero(), 1.0, 0.25);
  // Frame-aligned windows of one and two lengths.
  std::size_t i0 = 0;
  while (traj.frames[i0].t < 0.002) ++i0;
  const std::size_t len = (traj.frames.size() - 1 - i0) / 2;
  REQUIRE(len >= 2);
  const double t0 = traj.frames[i0].t, t1 = traj.frames[i0 + len].t, t2 = traj.frames[i0 + 2 * len].t;
  const double one = transport_kernel_integral(traj, p, t0, t1);
  const double two = transport_kernel_integral(traj, p, t0, t2);
  REQUIRE(one > 0.0);
  CHECK(two / one == doctest::Approx((t2 - t0) / (t1 - t0)).epsilon(0.01));
  // |u| = 1, so the integrand is int rho~ d mu, nearly constant for s - t near 1.
  const double kernel = kernel_integral(energy_measure(traj.frames[i0 + 2 * len].phi, c.epsilon, c.well, c.stencil_boundary()).density, p, t2);
  CHECK(two == doctest::Approx((t2 - t0) * kernel).epsilon(0.01));
}

TEST_CASE("hat_p regimes") {
  const HatP at_n = hat_p(2, 4, 2);
  CHECK(at_n.ambiguous);
  CHECK(at_n.value == doctest::Approx(0.5 - 1e-9).epsilon(1e-15));
  CHECK(at_n.value < 0.5);
  // p < n: (2pq - 2p - nq) / (pq) = (20 - 5 - 12) / 10.
  const HatP below = hat_p(2.5, 4, 3);
  CHECK_FALSE(below.ambiguous);
  CHECK(below.value == doctest::Approx(0.3));
  // p > n: (q - 2) / q.
  const HatP above = hat_p(3, 4, 2);
  CHECK_FALSE(above.ambiguous);
  CHECK(above.value == doctest::Approx(0.5));
  CHECK(hat_p(2, 4, 2, 1e-3).value == doctest::Approx(0.499));
  CHECK_THROWS_AS(hat_p(2, 4, 3), ConfigError);
  CHECK_THROWS_AS(hat_p(2, 2, 2), ConfigError);
  CHECK_THROWS_AS(hat_p(1.2, 10, 2), ConfigError);
}

TEST_CASE("property: hat_p is continuous at p = n from below") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> uq(2.5, 20.0);
  for (int i = 0; i < 50; ++i) {
    const double q = uq(rng);
    for (int n : {2, 3}) {
      const double below = hat_p(n - 1e-7, q, n).value;
      CHECK(below == doctest::Approx((q - 2) / q).epsilon(1e-6));
      CHECK(below <= (q - 2) / q + 1e-12);
    }
  }
}

TEST_CASE("velocity_l2 of a flat phase is 0") {
  const ScenarioConfig c = standing_wave(64, 8, 0.1, 0.01);
  CHECK(velocity_l2(constant_frames(c, 1.0, {0.01, 0.02}), c.inner_box(), 0.01, 0.02) == 0.0);
}

TEST_CASE("meyers_ziemer_check examples") {
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 128);
  CHECK(meyers_ziemer_check(ScalarField::filled(s, 0.0), 1.0, 20, 1, 0.05, 0.2).max_ratio == 0.0);

  // Lebesgue measure: mu(B_r) / r = pi r, so K = pi r_max. For the bump of radius a,
  // int f = pi a^2 / 3 and int |grad f| = 16 pi a / 15, so the ratio is 5 a / (16 K).
  const ScalarField lebesgue = ScalarField::filled(s, 1.0);
  const BallLattice lat = ball_lattice(s, Box{make_point(0.3, 0.3), make_point(0.7, 0.7)}, 0.25);
  const double k = density_ratio(lebesgue, lat).value;
  CHECK(k == doctest::Approx(kPi * lat.radii.back()).epsilon(0.02));
  const MeyersZiemerReport r = meyers_ziemer_check(lebesgue, k, 50, 3, 0.1, 0.25);
  CHECK(r.trials == 50);
  CHECK(r.max_ratio <= 1.0);
  CHECK(r.max_ratio <= 1.05 * 5 * 0.25 / (16 * k));
  CHECK(r.max_ratio >= 0.95 * 5 * 0.1 / (16 * k));
}

TEST_CASE("meyers_ziemer_check is deterministic and seed-stable on a flat interface") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 128);
  const double eps = 8 * s.h();
  const EnergyMeasure mu = energy_measure(tanh_field(s, eps), eps, DoubleWell::quartic());
  const double k = density_ratio(mu.density, ball_lattice(s, s.box(), 0.25)).value;
  const auto a = meyers_ziemer_check(mu.density, k, 100, 11, 4 * s.h(), 0.25);
  const auto b = meyers_ziemer_check(mu.density, k, 100, 11, 4 * s.h(), 0.25);
  CHECK(a.max_ratio == b.max_ratio);
  double lo = a.max_ratio, hi = a.max_ratio;
  for (std::uint64_t seed : {12u, 13u}) {
    const double v = meyers_ziemer_check(mu.density, k, 100, seed, 4 * s.h(), 0.25).max_ratio;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(std::isfinite(hi));
  CHECK(hi <= 1.2 * lo);
}

TEST_CASE("gronwall_check reduces to dissipation for g = 0 and needs a gradient field") {
  ScenarioConfig c = standing_wave(64, 8, 0.004, 0.001);
  c.shape = Shape::ball(Point::Zero(), 0.2);
  c.cutoff = CutoffKind::kNone;
  SolverConfig s;
  s.diag_every = 20;
  s.density_rows = false;
  s.track_steps = true;
  const RunResult run_result = run(c, s);
  const GronwallReport r = gronwall_check(run_result.trajectory);
  CHECK(r.is_static);
  CHECK(r.rate_bound == doctest::Approx(0.05));
  CHECK(r.samples == run_result.trajectory.steps.size());
  CHECK(r.max_rate < 0.0);
  CHECK(r.rate_ok);
  CHECK(r.monotone_ok);
  for (const StepSample& st : run_result.trajectory.steps) CHECK(st.weighted_energy == st.energy);

  Trajectory rotating = constant_frames(c, 1.0, {0.0, 0.001});
  rotating.scenario.transport = TransportSpec::rotation(1.0);
  CHECK_THROWS_AS(gronwall_check(rotating), std::invalid_argument);
}

TEST_CASE("property: energy density is nonnegative and bounds the discrepancy") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const DoubleWell w = DoubleWell::quartic();
  for (int trial = 0; trial < 5; ++trial) {
    const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 48);
    const ScalarField phi = ScalarField::sample(s, [&](const Point&) { return u(rng); });
    const double eps = 0.02 + 0.05 * trial;
    const ScalarField e = energy_density(phi, eps, w);
    const ScalarField xi = discrepancy_field(phi, eps, w);
    CHECK((e.values >= 0.0).all());
    CHECK((xi.values <= e.values).all());
    CHECK((xi.values.max(0.0) <= xi.values.abs()).all());
    // e - xi = 2 W / eps and e + xi = eps |grad phi|^2.
    CHECK(((e.values - xi.values) - 2.0 * phi.values.unaryExpr([&](double v) { return w.w(v); }) / eps).abs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("diagnostics rows: 18 named columns, finite along a run") {
  CHECK(DiagnosticsRow::columns().size() == 18);
  CHECK(DiagnosticsRow{}.values().size() == 18);
  ScenarioConfig c = standing_wave(64, 8, 0.004, 0.001);
  c.shape = Shape::ball(Point::Zero(), 0.2);
  c.cutoff = CutoffKind::kNone;
  SolverConfig s;
  s.diag_every = 40;
  s.probe = HuiskenProbe::at(make_point(0.2, 0.0), 0.01, 0.1);
  const RunResult r = run(c, s);
  REQUIRE(r.rows.size() >= 2);
  for (const DiagnosticsRow& row : r.rows) {
    for (double v : row.values()) CHECK(std::isfinite(v));
    CHECK(row.radius == doctest::Approx(0.2).epsilon(0.1));
    CHECK(row.density_ratio > 0.0);
  }
  CHECK(r.rows.front().gronwall_factor == 1.0);
}

TEST_CASE("property: diagnostics CSV round-trips and rejects bad rows") {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<DiagnosticsRow> rows(7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    DiagnosticsRow& r = rows[i];
    r.t = 1e-3 * static_cast<double>(i);
    r.step = static_cast<Index>(50 * i);
    r.energy = u(rng);
    r.sup_xi = u(rng) * 1e-7;
    r.argmax_center = make_point(u(rng), u(rng));
    r.monotonicity_residual = -1.0 / 3.0;
  }
  std::stringstream buf;
  write_diagnostics_csv(buf, rows);
  const std::string text = buf.str();
  const DiagnosticsTable table = read_diagnostics_csv(buf);
  CHECK(table.header == DiagnosticsRow::columns());
  REQUIRE(table.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = rows[i].values();
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(table.rows[i][k] == v[k]);
  }

  std::string tampered = text;
  const auto third = tampered.find('\n', tampered.find('\n', tampered.find('\n') + 1) + 1);
  tampered.replace(third + 1, tampered.find(',', third + 1) - third - 1, "nan");
  std::stringstream bad(tampered);
  try {
    read_diagnostics_csv(bad);
    FAIL("accepted a NaN row");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  std::stringstream short_row(DiagnosticsRow::columns()[0] + "\n1,2\n");
  CHECK_THROWS_AS(read_diagnostics_csv(short_row), std::runtime_error);
  std::stringstream empty;
  CHECK_THROWS_AS(read_diagnostics_csv(empty), std::runtime_error);
}
