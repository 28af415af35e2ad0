// Uniform Cartesian grids, node-sampled fields and second-order stencils.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace actx {

using Index = std::int64_t;

/// Physical point. For 2D grids the third component is ignored and kept at zero.
using Point = Eigen::Vector3d;

inline Point make_point(double x, double y, double z = 0.0) { return Point(x, y, z); }

/// Axis-aligned box [lo, hi] in the first `dim` components.
struct Box {
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  bool contains(const Point& x, int dim, double tol = 0.0) const;
  /// Distance from x (assumed inside) to the box boundary.
  double distance_to_boundary(const Point& x, int dim) const;
  /// Box shrunk by `margin` on every side.
  Box inset(double margin, int dim) const;
  double volume(int dim) const;
};

/// Raised when a stencil input holds NaN/Inf.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, Index node)
      : std::runtime_error(what), node_(node) {}
  Index node() const { return node_; }

 private:
  Index node_;
};

class GridSpec {
 public:
  static constexpr Index kDefaultMaxNodes = Index{1} << 26;

  GridSpec() = default;
  /// Throws std::invalid_argument when the box is degenerate, the spacing is not
  /// uniform across axes, or the node count exceeds `max_nodes`.
  GridSpec(int dim, const Point& lo, const Point& hi, std::array<int, 3> cells,
           Index max_nodes = kDefaultMaxNodes);

  /// Cube [lo, hi]^dim with `cells` cells per axis.
  static GridSpec cube(int dim, double lo, double hi, int cells);

  int dim() const { return dim_; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  double h() const { return h_; }
  int cells(int axis) const { return cells_[axis]; }
  int nodes(int axis) const { return axis < dim_ ? cells_[axis] + 1 : 1; }
  Index node_count() const;
  Index stride(int axis) const { return strides_[axis]; }
  Box box() const { return Box{lo_, hi_}; }
  /// Cell volume h^dim.
  double cell_volume() const;

  Index index(int i, int j, int k = 0) const {
    return Index(i) * strides_[0] + Index(j) * strides_[1] + Index(k) * strides_[2];
  }
  std::array<int, 3> multi_index(Index idx) const;
  Point node(int i, int j, int k = 0) const;
  Point node(Index idx) const;
  bool on_boundary(Index idx) const;

  bool operator==(const GridSpec& other) const;
  std::string describe() const;

 private:
  int dim_ = 0;
  Point lo_ = Point::Zero();
  Point hi_ = Point::Zero();
  std::array<int, 3> cells_{0, 0, 0};
  std::array<Index, 3> strides_{0, 0, 0};
  double h_ = 0.0;
};

/// One double per node, row-major (last axis fastest).
struct ScalarField {
  GridSpec spec;
  Eigen::ArrayXd values;

  ScalarField() = default;
  ScalarField(GridSpec s, Eigen::ArrayXd v);
  static ScalarField filled(const GridSpec& s, double value);

  template <typename Fn>
  static ScalarField sample(const GridSpec& s, Fn&& fn) {
    Eigen::ArrayXd v(s.node_count());
    for (Index n = 0; n < v.size(); ++n) v[n] = fn(s.node(n));
    return ScalarField(s, std::move(v));
  }

  double operator[](Index n) const { return values[n]; }
  double& operator[](Index n) { return values[n]; }
  Index size() const { return values.size(); }
};

/// dim components per node, stored as node_count x dim (component-contiguous).
struct VectorField {
  GridSpec spec;
  Eigen::ArrayXXd values;

  VectorField() = default;
  VectorField(GridSpec s, Eigen::ArrayXXd v);
  static VectorField zeros(const GridSpec& s);

  template <typename Fn>
  static VectorField sample(const GridSpec& s, Fn&& fn) {
    VectorField u = zeros(s);
    for (Index n = 0; n < s.node_count(); ++n) {
      const Point v = fn(s.node(n));
      for (int k = 0; k < s.dim(); ++k) u.values(n, k) = v[k];
    }
    return u;
  }

  Point at(Index n) const;
  /// Pointwise Euclidean norm.
  ScalarField norm() const;
  double max_norm() const;
};

/// Throws NonFiniteError naming the first offending node.
void require_finite(const ScalarField& f, const char* name);

// Stencils. Nodes on the box boundary see a ghost value 2*b - f(inner neighbour),
// where b is `boundary_value` or, when absent, the boundary node's own value.

ScalarField laplacian(const ScalarField& f, std::optional<double> boundary_value = std::nullopt);
VectorField gradient(const ScalarField& f, std::optional<double> boundary_value = std::nullopt);
/// |grad f|^2 per node, without materializing the gradient.
ScalarField gradient_squared(const ScalarField& f, std::optional<double> boundary_value = std::nullopt);
/// u . grad f with central differences.
ScalarField advection_term(const VectorField& u, const ScalarField& f,
                           std::optional<double> boundary_value = std::nullopt);

/// Fixed-shape pairwise summation; identical result for any thread count.
double pairwise_sum(std::span<const double> values);

/// Trapezoid-consistent quadrature. Nodes on the region boundary get half weight per
/// axis. Sets *empty (when given) if no node lies in the region.
double integrate(const ScalarField& f, const std::optional<Box>& region = std::nullopt,
                 bool* empty = nullptr);

/// Sum over nodes with |x - center| < radius, times h^dim. The ball is clipped to
/// the grid, with trapezoid half weights on the domain boundary; *outside is set
/// when the ball misses the box.
double ball_integrate(const ScalarField& f, const Point& center, double radius,
                      bool* outside = nullptr);

}  // namespace actx
