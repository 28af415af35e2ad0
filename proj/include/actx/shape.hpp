// Constructive shapes with signed distance (negative inside).
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actx/grid.hpp"

namespace actx {

struct BallShape {
  Point center = Point::Zero();
  double radius = 0.0;
};

/// Immutable CSG tree over ball, box and half-space primitives.
///
/// Distances are exact for primitives. Union and intersection use min/max, which can
/// under-estimate the distance away from the surface but never flips the sign.
class Shape {
 public:
  Shape() = default;

  static Shape ball(const Point& center, double radius);
  static Shape box(const Point& lo, const Point& hi);
  /// Inside is { x : normal . x < offset }.
  static Shape half_space(const Point& normal, double offset);
  static Shape union_of(std::vector<Shape> parts);
  static Shape intersection_of(std::vector<Shape> parts);
  static Shape complement(Shape inner);

  /// (ball cx cy [cz] r) | (box lo.. hi..) | (halfspace n.. offset)
  /// | (union s ...) | (intersection s ...) | (complement s)
  static Shape parse(std::string_view text, int dim);

  double signed_distance(const Point& x) const;
  std::string to_sexpr(int dim) const;
  bool empty() const { return node_ == nullptr; }
  /// Set when the shape is a single ball (radial oracles apply).
  std::optional<BallShape> as_ball() const;
  /// Exact boundary measure (perimeter / area) for a single ball or box.
  std::optional<double> boundary_measure(int dim) const;

 private:
  struct Node;
  explicit Shape(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace actx
