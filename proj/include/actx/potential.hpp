// Double-well potentials W with minima at +-1 and their heteroclinic profile.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace actx {

template <typename Scalar>
struct WellValues {
  Scalar w;
  Scalar dw;
  Scalar d2w;
};

enum class WellFamily { kQuartic, kPolynomial };

/// W(s) = sum_k c_k s^k. The standard quartic (1 - s^2)^2 / 2 keeps its own family
/// tag because its profile is known in closed form (tanh).
class DoubleWell {
 public:
  /// W(s) = (1 - s^2)^2 / 2 with alpha = 0.8, kappa = 1.
  static DoubleWell quartic();
  /// Coefficients in ascending powers. gamma is located numerically.
  static DoubleWell polynomial(std::vector<double> coefficients, double alpha, double kappa);

  template <typename Scalar>
  WellValues<Scalar> eval(Scalar s) const {
    // Horner for W, W', W'' together.
    Scalar w(0), dw(0), d2w(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      d2w = d2w * s + 2 * dw;
      dw = dw * s + w;
      w = w * s + Scalar(*it);
    }
    return {w, dw, d2w};
  }

  double w(double s) const { return eval(s).w; }
  double dw(double s) const {
    if (family_ == WellFamily::kQuartic) return -2.0 * s * (1.0 - s * s);
    return eval(s).dw;
  }
  double d2w(double s) const { return eval(s).d2w; }

  WellFamily family() const { return family_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }
  double kappa() const { return kappa_; }
  /// sup |W''| on [-bound, bound], by dense sampling.
  double max_abs_d2w(double bound = 1.1) const;
  /// max sqrt(2W) on [-1, 1]; the saturation value of eps|grad phi| on the profile.
  double max_profile_slope() const;

  /// Heteroclinic profile Psi: Psi' = sqrt(2 W(Psi)), Psi(0) = gamma, truncated to
  /// exactly +-1 for |s| >= kProfileCut with a C1 quintic blend over [kProfileBlend, kProfileCut].
  double profile(double s) const;
  /// Psi' consistent with profile().
  double profile_slope(double s) const;

  static constexpr double kProfileBlend = 8.0;
  static constexpr double kProfileCut = 10.0;

  std::string describe() const;

 private:
  DoubleWell(WellFamily family, std::vector<double> coeffs, double alpha, double kappa);
  void build_profile_table();
  double raw_profile(double s) const;
  double raw_profile_slope(double s) const;

  WellFamily family_ = WellFamily::kQuartic;
  std::vector<double> coeffs_;
  double gamma_ = 0.0;
  double alpha_ = 0.8;
  double kappa_ = 1.0;
  // RK4 samples of Psi on [-kProfileCut, kProfileCut] for polynomial wells.
  std::vector<double> table_;
  double table_step_ = 1e-3;
};

struct ConditionCheck {
  bool pass = true;
  std::optional<double> witness;  // sample that violates the condition
  double value = 0.0;             // offending quantity at the witness
  std::string detail;
};

struct ConditionReport {
  ConditionCheck minima;     // W(+-1) = W'(+-1) = 0, W''(+-1) > 0
  ConditionCheck sign;       // W' > 0 on (-1, gamma), W' < 0 on (gamma, 1)
  ConditionCheck convexity;  // W'' >= kappa for |s| >= alpha
  double gamma = 0.0;
  bool pass() const { return minima.pass && sign.pass && convexity.pass; }
};

/// Checks the three structural conditions on dense samples. Never throws.
ConditionReport validate_conditions(const DoubleWell& well);

/// sigma = int_{-1}^{1} sqrt(2 W(s)) ds by adaptive Gauss-Kronrod, relative error
/// <= 1e-8. Throws std::runtime_error when the quadrature does not converge.
double surface_tension(const DoubleWell& well);

}  // namespace actx
