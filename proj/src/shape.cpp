#include "actx/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "actx/sexpr.hpp"

namespace actx {

namespace {

struct BallNode {
  Point center;
  double radius;
};
struct BoxNode {
  Point lo;
  Point hi;
};
struct HalfSpaceNode {
  Point normal;
  double offset;
};
enum class Combine { kUnion, kIntersection, kComplement };

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

struct Shape::Node {
  std::variant<BallNode, BoxNode, HalfSpaceNode, Combine> kind;
  std::vector<Shape> children;
};

Shape Shape::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  return Shape(std::make_shared<Node>(Node{BallNode{center, radius}, {}}));
}

Shape Shape::box(const Point& lo, const Point& hi) {
  return Shape(std::make_shared<Node>(Node{BoxNode{lo, hi}, {}}));
}

Shape Shape::half_space(const Point& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0)) throw std::invalid_argument("halfspace: normal must be nonzero");
  return Shape(std::make_shared<Node>(Node{HalfSpaceNode{normal / n, offset / n}, {}}));
}

Shape Shape::union_of(std::vector<Shape> parts) {
  if (parts.empty()) throw std::invalid_argument("union: needs at least one shape");
  return Shape(std::make_shared<Node>(Node{Combine::kUnion, std::move(parts)}));
}

Shape Shape::intersection_of(std::vector<Shape> parts) {
  if (parts.empty()) throw std::invalid_argument("intersection: needs at least one shape");
  return Shape(std::make_shared<Node>(Node{Combine::kIntersection, std::move(parts)}));
}

Shape Shape::complement(Shape inner) {
  return Shape(std::make_shared<Node>(Node{Combine::kComplement, {std::move(inner)}}));
}

double Shape::signed_distance(const Point& x) const {
  if (!node_) throw std::logic_error("signed_distance on an empty shape");
  const Node& n = *node_;
  if (const auto* b = std::get_if<BallNode>(&n.kind)) return (x - b->center).norm() - b->radius;
  if (const auto* b = std::get_if<BoxNode>(&n.kind)) {
    const Point c = 0.5 * (b->lo + b->hi);
    const Point half = 0.5 * (b->hi - b->lo);
    Point q = (x - c).cwiseAbs() - half;
    // A flat axis (2D boxes in z) does not constrain the distance.
    for (int k = 0; k < 3; ++k) {
      if (!(half[k] > 0.0)) q[k] = -std::numeric_limits<double>::infinity();
    }
    return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
  }
  if (const auto* hs = std::get_if<HalfSpaceNode>(&n.kind)) return hs->normal.dot(x) - hs->offset;
  switch (std::get<Combine>(n.kind)) {
    case Combine::kUnion: {
      double d = std::numeric_limits<double>::infinity();
      for (const Shape& c : n.children) d = std::min(d, c.signed_distance(x));
      return d;
    }
    case Combine::kIntersection: {
      double d = -std::numeric_limits<double>::infinity();
      for (const Shape& c : n.children) d = std::max(d, c.signed_distance(x));
      return d;
    }
    case Combine::kComplement:
      return -n.children.front().signed_distance(x);
  }
  return 0.0;
}

std::string Shape::to_sexpr(int dim) const {
  if (!node_) return "()";
  const Node& n = *node_;
  std::string s;
  const auto coords = [&](const Point& p) {
    for (int k = 0; k < dim; ++k) s += ' ' + fmt(p[k]);
  };
  if (const auto* b = std::get_if<BallNode>(&n.kind)) {
    s = "(ball";
    coords(b->center);
    return s + ' ' + fmt(b->radius) + ')';
  }
  if (const auto* b = std::get_if<BoxNode>(&n.kind)) {
    s = "(box";
    coords(b->lo);
    coords(b->hi);
    return s + ')';
  }
  if (const auto* hs = std::get_if<HalfSpaceNode>(&n.kind)) {
    s = "(halfspace";
    coords(hs->normal);
    return s + ' ' + fmt(hs->offset) + ')';
  }
  switch (std::get<Combine>(n.kind)) {
    case Combine::kUnion: s = "(union"; break;
    case Combine::kIntersection: s = "(intersection"; break;
    case Combine::kComplement: s = "(complement"; break;
  }
  for (const Shape& c : n.children) s += ' ' + c.to_sexpr(dim);
  return s + ')';
}

std::optional<BallShape> Shape::as_ball() const {
  if (!node_) return std::nullopt;
  if (const auto* b = std::get_if<BallNode>(&node_->kind)) return BallShape{b->center, b->radius};
  return std::nullopt;
}

std::optional<double> Shape::boundary_measure(int dim) const {
  if (!node_) return std::nullopt;
  if (const auto* b = std::get_if<BallNode>(&node_->kind)) {
    return dim == 2 ? 2.0 * std::numbers::pi * b->radius
                    : 4.0 * std::numbers::pi * b->radius * b->radius;
  }
  if (const auto* b = std::get_if<BoxNode>(&node_->kind)) {
    const Point e = b->hi - b->lo;
    return dim == 2 ? 2.0 * (e[0] + e[1]) : 2.0 * (e[0] * e[1] + e[1] * e[2] + e[0] * e[2]);
  }
  return std::nullopt;
}

namespace {

Shape from_sexpr(const SExpr& e, int dim) {
  if (!e.is_list || e.items.empty()) {
    throw std::invalid_argument("shape: expected a list such as (ball 0 0 0.25), got '" + e.to_string() + "'");
  }
  const std::string& head = e.head();
  const auto point = [dim](const std::vector<double>& v, std::size_t at) {
    Point p = Point::Zero();
    for (int k = 0; k < dim; ++k) p[k] = v[at + k];
    return p;
  };
  const auto arity = [&](std::size_t want) {
    const auto v = e.numbers();
    if (v.size() != want) {
      throw std::invalid_argument("shape: (" + head + " ...) takes " + std::to_string(want) +
                                  " numbers in " + std::to_string(dim) + "D, got " + std::to_string(v.size()));
    }
    return v;
  };
  if (head == "ball") {
    const auto v = arity(dim + 1);
    return Shape::ball(point(v, 0), v[dim]);
  }
  if (head == "box") {
    const auto v = arity(2 * dim);
    return Shape::box(point(v, 0), point(v, dim));
  }
  if (head == "halfspace") {
    const auto v = arity(dim + 1);
    return Shape::half_space(point(v, 0), v[dim]);
  }
  std::vector<Shape> kids;
  for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(from_sexpr(e.items[i], dim));
  if (head == "union") return Shape::union_of(std::move(kids));
  if (head == "intersection") return Shape::intersection_of(std::move(kids));
  if (head == "complement") {
    if (kids.size() != 1) throw std::invalid_argument("shape: complement takes one shape");
    return Shape::complement(std::move(kids.front()));
  }
  throw std::invalid_argument("shape: unknown primitive '" + head + "'");
}

}  // namespace

Shape Shape::parse(std::string_view text, int dim) { return from_sexpr(parse_sexpr(text), dim); }

}  // namespace actx
