// Zero level set extraction and sharp-interface oracles.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "actx/grid.hpp"

namespace actx {

/// Segments (2D) or triangles (3D) on the zero level set, indexing `vertices`.
struct InterfaceSet {
  int dim = 2;
  std::vector<Point> vertices;
  std::vector<std::array<Index, 2>> segments;
  std::vector<std::array<Index, 3>> triangles;

  bool empty() const { return vertices.empty(); }
  /// Total length (2D) or area (3D).
  double measure() const;
};

/// Marching squares (2D, saddles split by the cell-average sign) or marching
/// cubes (3D). Vertices come from linear interpolation along grid edges and are
/// shared between neighbouring cells. Returns an empty set when phi has no sign change.
InterfaceSet extract_interface(const ScalarField& phi, double level = 0.0);

struct RadiusEstimate {
  double mean = 0.0;
  double deviation = 0.0;  // max |v - c| - min |v - c|
  double min = 0.0;
  double max = 0.0;
};

/// Throws std::invalid_argument on an empty set.
RadiusEstimate radius_estimate(const InterfaceSet& s, const Point& center);

/// Distance from p to the nearest segment or triangle.
double distance_to_interface(const Point& p, const InterfaceSet& s);

/// Symmetric vertex-to-element Hausdorff distance. Throws on empty input.
double hausdorff_distance(const InterfaceSet& a, const InterfaceSet& b);

/// Radial sharp-interface law dR/dt = -(n-1)/R + c R, integrated with RK4 in
/// Q = R^2 (dQ/dt = -2(n-1) + 2cQ), which stays regular up to extinction.
template <typename Scalar = double>
class McfOracle {
 public:
  McfOracle(Scalar r0, Scalar c, int dim, Scalar t_end, Scalar step_fraction = Scalar(1e-6))
      : r0_(r0), c_(c), dim_(dim), t_end_(t_end) {
    const Scalar a = Scalar(2 * (dim - 1));
    const auto rhs = [&](Scalar q) { return -a + Scalar(2) * c * q; };
    const long steps = t_end > Scalar(0) ? static_cast<long>(std::ceil(Scalar(1) / step_fraction)) : 0;
    const Scalar h = steps > 0 ? t_end / Scalar(steps) : Scalar(0);
    const long stride = std::max<long>(1, steps / kMaxSamples);
    Scalar q = r0 * r0;
    Scalar t = 0;
    times_.push_back(t);
    q_.push_back(q);
    for (long i = 1; i <= steps; ++i) {
      const Scalar k1 = rhs(q);
      const Scalar k2 = rhs(q + h * k1 / 2);
      const Scalar k3 = rhs(q + h * k2 / 2);
      const Scalar k4 = rhs(q + h * k3);
      const Scalar qn = q + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
      const Scalar tn = t + h;
      if (qn <= Scalar(0)) {
        // Linear crossing inside the last step.
        extinction_ = t + h * q / (q - qn);
        times_.push_back(*extinction_);
        q_.push_back(Scalar(0));
        return;
      }
      q = qn;
      t = tn;
      if (i % stride == 0 || i == steps) {
        times_.push_back(t);
        q_.push_back(q);
      }
    }
  }

  /// R(t), linear in Q between stored samples; 0 after extinction.
  Scalar at(Scalar t) const {
    if (t <= times_.front()) return r0_;
    if (t >= times_.back()) {
      if (extinction_) return Scalar(0);
      return std::sqrt(q_.back());
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const Scalar w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    const Scalar q = q_[i - 1] + w * (q_[i] - q_[i - 1]);
    return std::sqrt(std::max(q, Scalar(0)));
  }

  std::optional<Scalar> extinction_time() const { return extinction_; }
  const std::vector<Scalar>& times() const { return times_; }
  /// R at each stored time.
  std::vector<Scalar> radii() const {
    std::vector<Scalar> r(q_.size());
    for (std::size_t i = 0; i < q_.size(); ++i) r[i] = std::sqrt(std::max(q_[i], Scalar(0)));
    return r;
  }
  Scalar t_end() const { return t_end_; }
  int dim() const { return dim_; }
  Scalar coefficient() const { return c_; }

  static constexpr long kMaxSamples = 10000;

 private:
  Scalar r0_;
  Scalar c_;
  int dim_;
  Scalar t_end_;
  std::vector<Scalar> times_;
  std::vector<Scalar> q_;
  std::optional<Scalar> extinction_;
};

inline McfOracle<double> mcf_oracle(double r0, double c, int dim, double t_end) {
  return McfOracle<double>(r0, c, dim, t_end);
}

}  // namespace actx
