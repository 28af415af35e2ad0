#include "actx/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace actx {

namespace {

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double smoothstep5_slope(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Root of W' in (-1, 1): the last sign change from + to - on a dense sample,
// refined by bisection. Falls back to 0 when none exists (reported by validation).
double locate_gamma(const DoubleWell& w) {
  constexpr int kSamples = 20000;
  double prev_s = -1.0 + 1e-6;
  double prev = w.eval(prev_s).dw;
  for (int i = 1; i <= kSamples; ++i) {
    const double s = -1.0 + 1e-6 + (2.0 - 2e-6) * i / kSamples;
    const double cur = w.eval(s).dw;
    if (prev > 0.0 && cur <= 0.0) {
      double a = prev_s;
      double b = s;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        (w.eval(m).dw > 0.0 ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    prev = cur;
    prev_s = s;
  }
  return 0.0;
}

}  // namespace

DoubleWell::DoubleWell(WellFamily family, std::vector<double> coeffs, double alpha, double kappa)
    : family_(family), coeffs_(std::move(coeffs)), alpha_(alpha), kappa_(kappa) {
  if (coeffs_.empty()) throw std::invalid_argument("DoubleWell: empty coefficient list");
  if (family_ == WellFamily::kQuartic) {
    gamma_ = 0.0;
  } else {
    gamma_ = locate_gamma(*this);
    build_profile_table();
  }
}

DoubleWell DoubleWell::quartic() {
  return DoubleWell(WellFamily::kQuartic, {0.5, 0.0, -1.0, 0.0, 0.5}, 0.8, 1.0);
}

DoubleWell DoubleWell::polynomial(std::vector<double> coefficients, double alpha, double kappa) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("DoubleWell: alpha must lie in (0,1)");
  if (!(kappa > 0.0)) throw std::invalid_argument("DoubleWell: kappa must be positive");
  return DoubleWell(WellFamily::kPolynomial, std::move(coefficients), alpha, kappa);
}

double DoubleWell::max_abs_d2w(double bound) const {
  double m = 0.0;
  constexpr int kSamples = 10000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = -bound + 2.0 * bound * i / kSamples;
    m = std::max(m, std::abs(eval(s).d2w));
  }
  return m;
}

double DoubleWell::max_profile_slope() const {
  double m = 0.0;
  constexpr int kSamples = 10000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = -1.0 + 2.0 * i / kSamples;
    m = std::max(m, std::sqrt(2.0 * std::max(0.0, eval(s).w)));
  }
  return m;
}

void DoubleWell::build_profile_table() {
  // Psi' = sqrt(2 W(Psi)) from Psi(0) = gamma, RK4 in both directions.
  const auto rhs = [this](double p) { return std::sqrt(2.0 * std::max(0.0, eval(p).w)); };
  const int half = static_cast<int>(std::lround(kProfileCut / table_step_));
  table_.assign(2 * half + 1, 0.0);
  table_[half] = gamma_;
  for (int dir : {+1, -1}) {
    const double h = dir * table_step_;
    double p = gamma_;
    for (int i = 1; i <= half; ++i) {
      const double k1 = rhs(p);
      const double k2 = rhs(p + 0.5 * h * k1);
      const double k3 = rhs(p + 0.5 * h * k2);
      const double k4 = rhs(p + h * k3);
      p = std::clamp(p + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, -1.0, 1.0);
      table_[half + dir * i] = p;
    }
  }
}

double DoubleWell::raw_profile(double s) const {
  if (family_ == WellFamily::kQuartic) return std::tanh(s);
  const int half = (static_cast<int>(table_.size()) - 1) / 2;
  const double x = std::clamp(s, -kProfileCut, kProfileCut) / table_step_ + half;
  const int i = std::clamp(static_cast<int>(std::floor(x)), 0, static_cast<int>(table_.size()) - 2);
  const double t = x - i;
  // Cubic Hermite with slopes from the ODE itself.
  const double p0 = table_[i];
  const double p1 = table_[i + 1];
  const double m0 = std::sqrt(2.0 * std::max(0.0, eval(p0).w)) * table_step_;
  const double m1 = std::sqrt(2.0 * std::max(0.0, eval(p1).w)) * table_step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
}

double DoubleWell::raw_profile_slope(double s) const {
  if (family_ == WellFamily::kQuartic) {
    const double th = std::tanh(s);
    return 1.0 - th * th;
  }
  return std::sqrt(2.0 * std::max(0.0, eval(raw_profile(s)).w));
}

double DoubleWell::profile(double s) const {
  const double a = std::abs(s);
  if (a >= kProfileCut) return s > 0 ? 1.0 : -1.0;
  const double p = raw_profile(s);
  if (a <= kProfileBlend) return p;
  const double b = smoothstep5((a - kProfileBlend) / (kProfileCut - kProfileBlend));
  const double target = s > 0 ? 1.0 : -1.0;
  return p + b * (target - p);
}

double DoubleWell::profile_slope(double s) const {
  const double a = std::abs(s);
  if (a >= kProfileCut) return 0.0;
  const double slope = raw_profile_slope(s);
  if (a <= kProfileBlend) return slope;
  const double width = kProfileCut - kProfileBlend;
  const double t = (a - kProfileBlend) / width;
  const double b = smoothstep5(t);
  const double db = smoothstep5_slope(t) / width;
  const double p = raw_profile(s);
  return s > 0 ? slope * (1.0 - b) + db * (1.0 - p) : slope * (1.0 - b) + db * (1.0 + p);
}

std::string DoubleWell::describe() const {
  if (family_ == WellFamily::kQuartic) return "quartic";
  std::ostringstream os;
  os.precision(17);
  os << "polynomial";
  for (double c : coeffs_) os << ' ' << c;
  return os.str();
}

ConditionReport validate_conditions(const DoubleWell& well) {
  ConditionReport r;
  r.gamma = well.gamma();

  for (double s : {-1.0, 1.0}) {
    const auto v = well.eval(s);
    if (std::abs(v.w) > 1e-12 || std::abs(v.dw) > 1e-12 || !(v.d2w > 0.0)) {
      if (r.minima.pass) {
        r.minima.pass = false;
        r.minima.witness = s;
        r.minima.value = std::abs(v.w) > 1e-12 ? v.w : v.dw;
        r.minima.detail = "W or W' nonzero, or minimum not strict, at s=" + std::to_string(s);
      }
    }
  }

  constexpr int kSamples = 10000;
  for (int i = 1; i < kSamples; ++i) {
    const double s = -1.0 + 2.0 * i / kSamples;
    if (std::abs(s - r.gamma) < 1e-9) continue;
    const double d = well.eval(s).dw;
    const bool ok = s < r.gamma ? d > 0.0 : d < 0.0;
    if (!ok) {
      r.sign.pass = false;
      r.sign.witness = s;
      r.sign.value = d;
      r.sign.detail = "W' has the wrong sign relative to gamma";
      break;
    }
  }

  // |s| in [alpha, 2], positive side first so ties report the positive witness.
  double worst = std::numeric_limits<double>::infinity();
  for (int side : {+1, -1}) {
    for (int i = 0; i <= kSamples; ++i) {
      const double s = side * (well.alpha() + (2.0 - well.alpha()) * i / kSamples);
      const double d2 = well.eval(s).d2w;
      if (d2 < well.kappa() && d2 < worst) {
        worst = d2;
        r.convexity.pass = false;
        r.convexity.witness = s;
        r.convexity.value = d2;
        r.convexity.detail = "W'' below kappa";
      }
    }
  }
  return r;
}

double surface_tension(const DoubleWell& well) {
  const auto f = [&well](double s) { return std::sqrt(2.0 * std::max(0.0, well.eval(s).w)); };
  double error = 0.0;
  const double sigma =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -1.0, 1.0, 15, 1e-12, &error);
  if (!(sigma > 0.0) || !(error <= 1e-8 * sigma)) {
    throw std::runtime_error("surface_tension: quadrature did not converge (estimate " +
                             std::to_string(sigma) + ", error " + std::to_string(error) + ")");
  }
  return sigma;
}

}  // namespace actx
