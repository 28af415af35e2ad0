#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "actx/potential.hpp"

using namespace actx;

TEST_CASE("quartic values at the origin and the wells") {
  const DoubleWell w = DoubleWell::quartic();
  // W = (1 - s^2)^2 / 2, W' = -2 s (1 - s^2), W'' = 6 s^2 - 2.
  const auto at0 = w.eval(0.0);
  CHECK(at0.w == doctest::Approx(0.5));
  CHECK(at0.dw == 0.0);
  CHECK(at0.d2w == doctest::Approx(-2.0));
  for (double s : {1.0, -1.0}) {
    const auto v = w.eval(s);
    CHECK(v.w == 0.0);
    CHECK(v.dw == 0.0);
    CHECK(v.d2w == doctest::Approx(4.0));
  }
  CHECK(w.dw(0.5) == doctest::Approx(-2 * 0.5 * 0.75));
}

TEST_CASE("standard quartic satisfies the structural conditions") {
  const ConditionReport r = validate_conditions(DoubleWell::quartic());
  CHECK(r.pass());
  CHECK(r.gamma == 0.0);
  // W''(0.8) = 6 * 0.64 - 2.
  CHECK(DoubleWell::quartic().d2w(0.8) == doctest::Approx(1.84));
}

TEST_CASE("convexity fails for a small alpha with the witness at |s| = alpha") {
  const DoubleWell w = DoubleWell::polynomial({0.5, 0.0, -1.0, 0.0, 0.5}, 0.3, 1.0);
  const ConditionReport r = validate_conditions(w);
  CHECK(r.minima.pass);
  CHECK(r.sign.pass);
  CHECK_FALSE(r.convexity.pass);
  REQUIRE(r.convexity.witness.has_value());
  CHECK(std::abs(*r.convexity.witness) == doctest::Approx(0.3));
  CHECK(r.convexity.value == doctest::Approx(6 * 0.09 - 2));
  CHECK(r.gamma == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a well with a wrong minimum is reported, not thrown") {
  // W = (1 - s^2)^2 / 2 + 0.1 s: W'(+-1) != 0.
  const DoubleWell w = DoubleWell::polynomial({0.5, 0.1, -1.0, 0.0, 0.5}, 0.8, 1.0);
  ConditionReport r;
  CHECK_NOTHROW(r = validate_conditions(w));
  CHECK_FALSE(r.minima.pass);
  CHECK(r.minima.witness.has_value());
}

TEST_CASE("polynomial wells reject bad alpha and kappa") {
  CHECK_THROWS_AS(DoubleWell::polynomial({0.5, 0, -1, 0, 0.5}, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DoubleWell::polynomial({0.5, 0, -1, 0, 0.5}, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("profile of the quartic is tanh and truncates to exactly +-1") {
  const DoubleWell w = DoubleWell::quartic();
  CHECK(w.profile(0.0) == 0.0);
  for (double s = -5.0; s <= 5.0; s += 0.01) CHECK(std::abs(w.profile(s) - std::tanh(s)) <= 1e-10);
  for (double s : {10.0, 12.0, 1e6}) {
    CHECK(w.profile(s) == 1.0);
    CHECK(w.profile(-s) == -1.0);
  }
  // tanh'' = -2 tanh (1 - tanh^2) = W'(tanh): the heteroclinic equation.
  for (double s : {-2.0, -0.5, 0.3, 1.7}) {
    const double t = std::tanh(s);
    CHECK(-2 * t * (1 - t * t) == doctest::Approx(w.dw(t)));
  }
}

TEST_CASE("polynomial profile agrees with tanh for the quartic coefficients") {
  const DoubleWell poly = DoubleWell::polynomial({0.5, 0.0, -1.0, 0.0, 0.5}, 0.8, 1.0);
  CHECK(poly.profile(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  for (double s = -4.0; s <= 4.0; s += 0.25) CHECK(std::abs(poly.profile(s) - std::tanh(s)) < 1e-7);
}

TEST_CASE("surface tension of the quartic and of scaled wells") {
  const double sigma = surface_tension(DoubleWell::quartic());
  // int_{-1}^{1} (1 - s^2) ds = 4/3.
  CHECK(std::abs(sigma - 4.0 / 3.0) <= 1e-8);
  const DoubleWell scaled = DoubleWell::polynomial({2.0, 0.0, -4.0, 0.0, 2.0}, 0.8, 1.0);
  CHECK(surface_tension(scaled) == doctest::Approx(2.0 * sigma).epsilon(1e-10));
}

TEST_CASE("surface tension integrand is even for a symmetric well") {
  const DoubleWell w = DoubleWell::quartic();
  // Simpson on [0, 1] doubled against the full adaptive value.
  const int n = 20000;
  double half = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double f = std::sqrt(2.0 * w.w(s));
    half += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
  }
  half /= 3.0 * n;
  CHECK(std::abs(2.0 * half - surface_tension(w)) <= 1e-10);
}

TEST_CASE("property: derivatives match centred differences") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  const DoubleWell quartic = DoubleWell::quartic();
  const DoubleWell sextic = DoubleWell::polynomial({0.5, 0.0, -0.75, 0.0, 0.0, 0.0, 0.25}, 0.8, 1.0);
  const double d = 1e-4;
  for (const DoubleWell* w : {&quartic, &sextic}) {
    for (int i = 0; i < 100; ++i) {
      const double s = u(rng);
      const double fd1 = (w->w(s + d) - w->w(s - d)) / (2 * d);
      const double fd2 = (w->dw(s + d) - w->dw(s - d)) / (2 * d);
      CHECK(std::abs(fd1 - w->dw(s)) < 1e-6);
      CHECK(std::abs(fd2 - w->d2w(s)) < 1e-6);
    }
  }
}

TEST_CASE("property: the profile satisfies Psi'^2 / 2 = W(Psi)") {
  const DoubleWell quartic = DoubleWell::quartic();
  const DoubleWell poly = DoubleWell::polynomial({0.5, 0.0, -1.0, 0.0, 0.5}, 0.8, 1.0);
  for (const DoubleWell* w : {&quartic, &poly}) {
    for (double s = -DoubleWell::kProfileBlend; s <= DoubleWell::kProfileBlend; s += 0.037) {
      const double slope = w->profile_slope(s);
      CHECK(std::abs(0.5 * slope * slope - w->w(w->profile(s))) <= 1e-8);
    }
  }
}

TEST_CASE("property: profile is monotone and bounded") {
  const DoubleWell w = DoubleWell::polynomial({0.5, 0.0, -0.75, 0.0, 0.0, 0.0, 0.25}, 0.8, 1.0);
  double prev = -1.0;
  for (double s = -12.0; s <= 12.0; s += 0.01) {
    const double p = w.profile(s);
    CHECK(p >= prev);
    CHECK(std::abs(p) <= 1.0);
    prev = p;
  }
  CHECK(surface_tension(w) > 0.0);
}
