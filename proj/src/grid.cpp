#include "actx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace actx {

bool Box::contains(const Point& x, int dim, double tol) const {
  for (int k = 0; k < dim; ++k) {
    if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
  }
  return true;
}

double Box::distance_to_boundary(const Point& x, int dim) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim; ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
  return d;
}

Box Box::inset(double margin, int dim) const {
  Box b = *this;
  for (int k = 0; k < dim; ++k) {
    b.lo[k] += margin;
    b.hi[k] -= margin;
  }
  return b;
}

double Box::volume(int dim) const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= std::max(0.0, hi[k] - lo[k]);
  return v;
}

GridSpec::GridSpec(int dim, const Point& lo, const Point& hi, std::array<int, 3> cells,
                   Index max_nodes)
    : dim_(dim), lo_(lo), hi_(hi), cells_(cells) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("GridSpec: dim must be 2 or 3");
  for (int k = dim; k < 3; ++k) {
    lo_[k] = 0.0;
    hi_[k] = 0.0;
    cells_[k] = 0;
  }
  for (int k = 0; k < dim; ++k) {
    if (!(hi_[k] > lo_[k])) throw std::invalid_argument("GridSpec: hi must exceed lo on every axis");
    if (cells_[k] <= 0) throw std::invalid_argument("GridSpec: cells must be positive");
  }
  h_ = (hi_[0] - lo_[0]) / cells_[0];
  for (int k = 1; k < dim; ++k) {
    const double hk = (hi_[k] - lo_[k]) / cells_[k];
    if (std::abs(hk - h_) > 1e-12 * h_) {
      throw std::invalid_argument("GridSpec: spacing differs across axes (" + std::to_string(h_) +
                                  " vs " + std::to_string(hk) + ")");
    }
  }
  strides_[2] = 1;
  strides_[1] = nodes(2);
  strides_[0] = strides_[1] * nodes(1);
  if (node_count() >= max_nodes) {
    throw std::invalid_argument("GridSpec: " + std::to_string(node_count()) +
                                " nodes exceed the cap of " + std::to_string(max_nodes));
  }
}

GridSpec GridSpec::cube(int dim, double lo, double hi, int cells) {
  return GridSpec(dim, Point::Constant(lo), Point::Constant(hi), {cells, cells, cells});
}

Index GridSpec::node_count() const {
  return Index(nodes(0)) * nodes(1) * nodes(2);
}

double GridSpec::cell_volume() const { return std::pow(h_, dim_); }

std::array<int, 3> GridSpec::multi_index(Index idx) const {
  std::array<int, 3> m{};
  m[0] = static_cast<int>(idx / strides_[0]);
  idx -= Index(m[0]) * strides_[0];
  m[1] = static_cast<int>(idx / strides_[1]);
  m[2] = static_cast<int>(idx - Index(m[1]) * strides_[1]);
  return m;
}

Point GridSpec::node(int i, int j, int k) const {
  Point x = Point::Zero();
  const int m[3] = {i, j, k};
  for (int a = 0; a < dim_; ++a) {
    // Pin the last node exactly on hi so boxes aligned with the domain are exact.
    x[a] = m[a] == cells_[a] ? hi_[a] : lo_[a] + m[a] * h_;
  }
  return x;
}

Point GridSpec::node(Index idx) const {
  const auto m = multi_index(idx);
  return node(m[0], m[1], m[2]);
}

bool GridSpec::on_boundary(Index idx) const {
  const auto m = multi_index(idx);
  for (int a = 0; a < dim_; ++a) {
    if (m[a] == 0 || m[a] == cells_[a]) return true;
  }
  return false;
}

bool GridSpec::operator==(const GridSpec& o) const {
  return dim_ == o.dim_ && cells_ == o.cells_ && lo_ == o.lo_ && hi_ == o.hi_;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << dim_ << "D grid";
  for (int k = 0; k < dim_; ++k) os << (k == 0 ? " " : "x") << cells_[k];
  os << " cells, h=" << h_;
  return os.str();
}

ScalarField::ScalarField(GridSpec s, Eigen::ArrayXd v) : spec(std::move(s)), values(std::move(v)) {
  if (values.size() != spec.node_count()) {
    throw std::invalid_argument("ScalarField: value count " + std::to_string(values.size()) +
                                " does not match node count " + std::to_string(spec.node_count()));
  }
}

ScalarField ScalarField::filled(const GridSpec& s, double value) {
  return ScalarField(s, Eigen::ArrayXd::Constant(s.node_count(), value));
}

VectorField::VectorField(GridSpec s, Eigen::ArrayXXd v) : spec(std::move(s)), values(std::move(v)) {
  if (values.rows() != spec.node_count() || values.cols() != spec.dim()) {
    throw std::invalid_argument("VectorField: shape does not match grid");
  }
}

VectorField VectorField::zeros(const GridSpec& s) {
  return VectorField(s, Eigen::ArrayXXd::Zero(s.node_count(), s.dim()));
}

Point VectorField::at(Index n) const {
  Point p = Point::Zero();
  for (int k = 0; k < spec.dim(); ++k) p[k] = values(n, k);
  return p;
}

ScalarField VectorField::norm() const {
  return ScalarField(spec, values.square().rowwise().sum().sqrt());
}

double VectorField::max_norm() const {
  if (values.rows() == 0) return 0.0;
  return std::sqrt(values.square().rowwise().sum().maxCoeff());
}

void require_finite(const ScalarField& f, const char* name) {
  for (Index n = 0; n < f.size(); ++n) {
    if (!std::isfinite(f.values[n])) {
      throw NonFiniteError(std::string(name) + ": non-finite value at node " + std::to_string(n), n);
    }
  }
}

namespace {

// Neighbour values along `axis`, with the Dirichlet ghost rule on the boundary.
struct Neighbours {
  double minus;
  double plus;
};

inline Neighbours neighbours(const ScalarField& f, Index n, int m, int axis,
                             const std::optional<double>& bv) {
  const GridSpec& s = f.spec;
  const Index st = s.stride(axis);
  const double self = f.values[n];
  const double b = bv ? *bv : self;
  const int last = s.cells(axis);
  Neighbours nb{};
  nb.minus = m > 0 ? f.values[n - st] : 2.0 * b - f.values[n + st];
  nb.plus = m < last ? f.values[n + st] : 2.0 * b - f.values[n - st];
  return nb;
}

// Visits every node in storage order without index division.
template <typename Fn>
void for_each_node(const GridSpec& s, Fn&& fn) {
  const int n0 = s.nodes(0), n1 = s.nodes(1), n2 = s.nodes(2);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      Index n = s.index(i, j, 0);
      for (int k = 0; k < n2; ++k, ++n) fn(n, std::array<int, 3>{i, j, k});
    }
  }
}

}  // namespace

ScalarField laplacian(const ScalarField& f, std::optional<double> boundary_value) {
  require_finite(f, "laplacian");
  const GridSpec& s = f.spec;
  const double inv_h2 = 1.0 / (s.h() * s.h());
  Eigen::ArrayXd out(s.node_count());
  for_each_node(s, [&](Index n, const std::array<int, 3>& m) {
    double acc = 0.0;
    for (int a = 0; a < s.dim(); ++a) {
      const auto nb = neighbours(f, n, m[a], a, boundary_value);
      acc += nb.minus + nb.plus - 2.0 * f.values[n];
    }
    out[n] = acc * inv_h2;
  });
  return ScalarField(s, std::move(out));
}

VectorField gradient(const ScalarField& f, std::optional<double> boundary_value) {
  require_finite(f, "gradient");
  const GridSpec& s = f.spec;
  const double inv_2h = 0.5 / s.h();
  Eigen::ArrayXXd out(s.node_count(), s.dim());
  for_each_node(s, [&](Index n, const std::array<int, 3>& m) {
    for (int a = 0; a < s.dim(); ++a) {
      const auto nb = neighbours(f, n, m[a], a, boundary_value);
      out(n, a) = (nb.plus - nb.minus) * inv_2h;
    }
  });
  return VectorField(s, std::move(out));
}

ScalarField gradient_squared(const ScalarField& f, std::optional<double> boundary_value) {
  require_finite(f, "gradient_squared");
  const GridSpec& s = f.spec;
  const double inv_2h = 0.5 / s.h();
  Eigen::ArrayXd out(s.node_count());
  for_each_node(s, [&](Index n, const std::array<int, 3>& m) {
    double acc = 0.0;
    for (int a = 0; a < s.dim(); ++a) {
      const auto nb = neighbours(f, n, m[a], a, boundary_value);
      const double d = (nb.plus - nb.minus) * inv_2h;
      acc += d * d;
    }
    out[n] = acc;
  });
  return ScalarField(s, std::move(out));
}

ScalarField advection_term(const VectorField& u, const ScalarField& f,
                           std::optional<double> boundary_value) {
  if (!(u.spec == f.spec)) {
    throw std::invalid_argument("advection_term: velocity u (" + u.spec.describe() +
                                ") and field f (" + f.spec.describe() + ") are on different grids");
  }
  const VectorField g = gradient(f, boundary_value);
  return ScalarField(f.spec, (u.values * g.values).rowwise().sum());
}

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 64;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

namespace {

// Per-axis trapezoid weights restricted to a region: 0 outside, 1/2 on the region
// boundary, 1 inside.
std::vector<double> axis_weights(const GridSpec& s, int axis, const std::optional<Box>& region) {
  std::vector<double> w(s.nodes(axis), 1.0);
  const double tol = 1e-9 * s.h();
  for (int i = 0; i < s.nodes(axis); ++i) {
    const double x = i == s.cells(axis) ? s.hi()[axis] : s.lo()[axis] + i * s.h();
    const double a = region ? std::max(region->lo[axis], s.lo()[axis]) : s.lo()[axis];
    const double b = region ? std::min(region->hi[axis], s.hi()[axis]) : s.hi()[axis];
    if (x < a - tol || x > b + tol) {
      w[i] = 0.0;
    } else if (std::abs(x - a) <= tol || std::abs(x - b) <= tol) {
      w[i] = 0.5;
    }
  }
  return w;
}

}  // namespace

double integrate(const ScalarField& f, const std::optional<Box>& region, bool* empty) {
  const GridSpec& s = f.spec;
  std::array<std::vector<double>, 3> w;
  for (int a = 0; a < 3; ++a) {
    w[a] = a < s.dim() ? axis_weights(s, a, region) : std::vector<double>{1.0};
  }
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(s.node_count()));
  bool any = false;
  for (int i = 0; i < s.nodes(0); ++i) {
    if (w[0][i] == 0.0) continue;
    for (int j = 0; j < s.nodes(1); ++j) {
      if (w[1][j] == 0.0) continue;
      for (int k = 0; k < s.nodes(2); ++k) {
        if (w[2][k] == 0.0) continue;
        any = true;
        terms.push_back(w[0][i] * w[1][j] * w[2][k] * f.values[s.index(i, j, k)]);
      }
    }
  }
  if (empty) *empty = !any;
  return pairwise_sum(terms) * s.cell_volume();
}

double ball_integrate(const ScalarField& f, const Point& center, double radius, bool* outside) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_integrate: radius must be positive");
  const GridSpec& s = f.spec;
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
  double dist2_to_box = 0.0;
  for (int a = 0; a < s.dim(); ++a) {
    const double c = center[a];
    const double gap = std::max({s.lo()[a] - c, c - s.hi()[a], 0.0});
    dist2_to_box += gap * gap;
    lo[a] = std::max(0, static_cast<int>(std::ceil((c - radius - s.lo()[a]) / s.h())));
    hi[a] = std::min(s.cells(a), static_cast<int>(std::floor((c + radius - s.lo()[a]) / s.h())));
  }
  const bool miss = dist2_to_box >= radius * radius;
  if (outside) *outside = miss;
  if (miss) return 0.0;
  const double r2 = radius * radius;
  double sum = 0.0;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const Point x = s.node(i, j, k);
        if ((x - center).squaredNorm() >= r2) continue;
        // Half weight per axis on the domain boundary, matching integrate().
        double w = 1.0;
        const std::array<int, 3> m{i, j, k};
        for (int a = 0; a < s.dim(); ++a) {
          if (m[a] == 0 || m[a] == s.cells(a)) w *= 0.5;
        }
        sum += w * f.values[s.index(i, j, k)];
      }
    }
  }
  return sum * s.cell_volume();
}

}  // namespace actx
