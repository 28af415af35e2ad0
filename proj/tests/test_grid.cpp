#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "actx/grid.hpp"

using namespace actx;

namespace {

constexpr double kPi = std::numbers::pi;

// Max |f - g| over nodes at least `margin` cells from the boundary.
double interior_max_error(const ScalarField& f, const ScalarField& g, int margin = 1) {
  const GridSpec& s = f.spec;
  double err = 0.0;
  for (Index n = 0; n < s.node_count(); ++n) {
    const auto idx = s.multi_index(n);
    bool inside = true;
    for (int a = 0; a < s.dim(); ++a) inside = inside && idx[a] >= margin && idx[a] <= s.cells(a) - margin;
    if (inside) err = std::max(err, std::abs(f[n] - g[n]));
  }
  return err;
}

ScalarField random_field(const GridSpec& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return ScalarField::sample(s, [&](const Point&) { return u(rng); });
}

}  // namespace

TEST_CASE("grid spec rejects degenerate and non-uniform boxes") {
  CHECK_THROWS_AS(GridSpec(2, make_point(0, 0), make_point(1, 2), {10, 10, 0}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(2, make_point(0, 0), make_point(0, 1), {10, 10, 0}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, make_point(0, 0), make_point(1, 1), {10, 10, 0}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(2, make_point(0, 0), make_point(1, 1), {100, 100, 0}, 1000), std::invalid_argument);
  const GridSpec s(2, make_point(0, 0), make_point(1, 2), {10, 20, 0});
  CHECK(s.h() == doctest::Approx(0.1));
  CHECK(s.node_count() == 11 * 21);
}

TEST_CASE("node indexing round-trips") {
  const GridSpec s = GridSpec::cube(3, -1.0, 1.0, 6);
  for (Index n = 0; n < s.node_count(); ++n) {
    const auto idx = s.multi_index(n);
    CHECK(s.index(idx[0], idx[1], idx[2]) == n);
  }
  CHECK(s.node(s.index(6, 0, 3)).isApprox(make_point(1.0, -1.0, 0.0)));
  CHECK(s.stride(2) == 1);
}

TEST_CASE("laplacian of a quadratic is exact") {
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 32);
  const ScalarField f = ScalarField::sample(s, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; });
  CHECK(interior_max_error(laplacian(f), ScalarField::filled(s, 4.0)) < 1e-9);
}

TEST_CASE("laplacian of a linear field vanishes") {
  const GridSpec s = GridSpec::cube(3, 0.0, 1.0, 16);
  const ScalarField f = ScalarField::sample(s, [](const Point& x) { return 2.0 * x[0] - 3.0 * x[1] + x[2]; });
  CHECK(interior_max_error(laplacian(f), ScalarField::filled(s, 0.0)) < 1e-10);
}

TEST_CASE("laplacian converges at second order") {
  const auto error_at = [](int cells) {
    const GridSpec s = GridSpec::cube(2, 0.0, 1.0, cells);
    const ScalarField f = ScalarField::sample(s, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
    const ScalarField exact =
        ScalarField::sample(s, [](const Point& x) { return -4 * kPi * kPi * std::sin(2 * kPi * x[0]); });
    return interior_max_error(laplacian(f), exact);
  };
  const double ratio = error_at(32) / error_at(64);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("gradient of linear and constant fields") {
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 16);
  const VectorField g = gradient(ScalarField::sample(s, [](const Point& x) { return 0.5 * x[0] - 2.0 * x[1]; }));
  const VectorField z = gradient(ScalarField::filled(s, 3.0));
  for (Index n = 0; n < s.node_count(); ++n) {
    if (s.on_boundary(n)) continue;
    CHECK(g.values(n, 0) == doctest::Approx(0.5));
    CHECK(g.values(n, 1) == doctest::Approx(-2.0));
    CHECK(z.values(n, 0) == 0.0);
    CHECK(z.values(n, 1) == 0.0);
  }
}

TEST_CASE("gradient of a tanh profile at eps = 8h") {
  const int cells = 256;
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, cells);
  const double eps = 8.0 * s.h();
  const ScalarField f = ScalarField::sample(s, [&](const Point& x) { return std::tanh(x[0] / eps); });
  const VectorField g = gradient(f);
  double err = 0.0;
  for (Index n = 0; n < s.node_count(); ++n) {
    if (s.on_boundary(n)) continue;
    const double th = std::tanh(s.node(n)[0] / eps);
    err = std::max(err, std::abs(g.values(n, 0) - (1 - th * th) / eps));
  }
  CHECK(err <= 0.02 / eps);
}

TEST_CASE("advection term examples") {
  const GridSpec s = GridSpec::cube(2, -1.0, 1.0, 20);
  const VectorField e1 = VectorField::sample(s, [](const Point&) { return make_point(1, 0); });
  const ScalarField x1 = ScalarField::sample(s, [](const Point& x) { return x[0]; });
  const ScalarField r2 = ScalarField::sample(s, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; });
  const VectorField rot = VectorField::sample(s, [](const Point& x) { return make_point(x[1], -x[0]); });

  CHECK(interior_max_error(advection_term(e1, x1), ScalarField::filled(s, 1.0)) < 1e-12);
  CHECK(interior_max_error(advection_term(VectorField::zeros(s), r2), ScalarField::filled(s, 0.0)) == 0.0);
  CHECK(interior_max_error(advection_term(rot, r2), ScalarField::filled(s, 0.0)) < 1e-12);

  const VectorField wrong = VectorField::zeros(GridSpec::cube(2, -1.0, 1.0, 10));
  CHECK_THROWS_AS(advection_term(wrong, x1), std::invalid_argument);
}

TEST_CASE("stencils reject non-finite input with the node index") {
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 8);
  ScalarField f = ScalarField::filled(s, 0.0);
  const Index bad = s.index(3, 4);
  f[bad] = std::nan("");
  try {
    (void)laplacian(f);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.node() == bad);
  }
  CHECK_THROWS_AS(gradient(f), NonFiniteError);
}

TEST_CASE("integrate examples") {
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 40);
  const ScalarField one = ScalarField::filled(s, 1.0);
  CHECK(integrate(one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate(one, Box{make_point(0, 0), make_point(0.5, 1)}) == doctest::Approx(0.5).epsilon(1e-12));
  const ScalarField x1 = ScalarField::sample(s, [](const Point& x) { return x[0]; });
  CHECK(std::abs(integrate(x1) - 0.5) < 1e-10);

  bool empty = false;
  CHECK(integrate(one, Box{make_point(0.51, 0.51), make_point(0.52, 0.52)}, &empty) == 0.0);
  CHECK(empty);
}

TEST_CASE("ball_integrate examples") {
  const GridSpec s = GridSpec::cube(2, -0.5, 0.5, 128);
  const ScalarField one = ScalarField::filled(s, 1.0);
  const double r = 0.25;
  CHECK(std::abs(ball_integrate(one, Point::Zero(), r) - kPi * r * r) <= 3 * s.h() * 2 * kPi * r);

  // A ball narrower than half a cell, centred between nodes, captures nothing.
  const Point between = make_point(0.5 * s.h(), 0.5 * s.h());
  CHECK(ball_integrate(one, between, 0.4 * s.h()) == 0.0);

  CHECK(ball_integrate(one, Point::Zero(), 2.0) == doctest::Approx(integrate(one)).epsilon(1e-12));

  bool outside = false;
  CHECK(ball_integrate(one, make_point(3, 3), 0.5, &outside) == 0.0);
  CHECK(outside);
  CHECK_THROWS_AS(ball_integrate(one, Point::Zero(), 0.0), std::invalid_argument);
}

TEST_CASE("property: laplacian is linear") {
  std::mt19937_64 rng(11);
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 24);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField f = random_field(s, rng);
    const ScalarField g = random_field(s, rng);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    const double a = coef(rng), b = coef(rng);
    const ScalarField combo(s, a * f.values + b * g.values);
    const Eigen::ArrayXd lhs = laplacian(combo).values;
    const Eigen::ArrayXd rhs = a * laplacian(f).values + b * laplacian(g).values;
    CHECK((lhs - rhs).abs().maxCoeff() <= 1e-12 * rhs.abs().maxCoeff());
  }
}

TEST_CASE("property: discrete integration by parts") {
  std::mt19937_64 rng(12);
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 48);
  // Random smooth fields supported away from the boundary.
  const auto bump_field = [&]() {
    std::uniform_real_distribution<double> c(0.35, 0.65), a(-1.0, 1.0), k(1.0, 6.0);
    const double cx = c(rng), cy = c(rng), amp = a(rng), kx = k(rng), ky = k(rng);
    return ScalarField::sample(s, [=](const Point& x) {
      const double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
      const double b = std::max(0.0, 1.0 - r2 / 0.04);
      return amp * b * b * b * std::cos(kx * x[0]) * std::sin(ky * x[1] + 0.3);
    });
  };
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField f = bump_field();
    const ScalarField g = bump_field();
    const double a = integrate(ScalarField(s, f.values * laplacian(g).values));
    const double b = integrate(ScalarField(s, g.values * laplacian(f).values));
    CHECK(std::abs(a - b) <= 1e-10);
  }
}

TEST_CASE("property: ball_integrate is monotone in the radius") {
  std::mt19937_64 rng(13);
  const GridSpec s = GridSpec::cube(2, 0.0, 1.0, 64);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField f = ScalarField::sample(s, [&](const Point&) { return u(rng); });
    const Point c = make_point(u(rng), u(rng));
    double prev = 0.0;
    for (double r = 0.01; r < 1.6; r += 0.01) {
      const double v = ball_integrate(f, c, r);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("property: refinement reduces stencil error by four") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> k(1.0, 3.0), ph(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double kx = k(rng), ky = k(rng), p = ph(rng);
    const auto error_at = [&](int cells) {
      const GridSpec s = GridSpec::cube(2, 0.0, 1.0, cells);
      const ScalarField f =
          ScalarField::sample(s, [&](const Point& x) { return std::sin(kx * x[0] + p) * std::cos(ky * x[1]); });
      const ScalarField exact = ScalarField::sample(
          s, [&](const Point& x) { return -(kx * kx + ky * ky) * std::sin(kx * x[0] + p) * std::cos(ky * x[1]); });
      return interior_max_error(laplacian(f), exact);
    };
    CHECK(error_at(32) / error_at(64) == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("pairwise_sum matches a long-double reference") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(100003);
  long double ref = 0.0L;
  for (double& x : v) {
    x = u(rng);
    ref += x;
  }
  CHECK(std::abs(pairwise_sum(v) - static_cast<double>(ref)) < 1e-11);
}
