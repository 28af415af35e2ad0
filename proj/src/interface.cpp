#include "actx/interface.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace actx {

namespace {

// Shared edge vertices, keyed by (lower node, axis).
class VertexPool {
 public:
  VertexPool(const ScalarField& phi, double level, std::vector<Point>& out)
      : phi_(phi), level_(level), out_(out) {}

  // Vertex on the edge from node `n` along `axis`, or -1 without a crossing.
  Index on_edge(Index n, int axis) {
    const Index m = n + phi_.spec.stride(axis);
    const double a = phi_.values[n] - level_;
    const double b = phi_.values[m] - level_;
    if ((a > 0.0) == (b > 0.0)) return -1;
    const Index key = n * 3 + axis;
    const auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const double t = a / (a - b);
    const Point pa = phi_.spec.node(n);
    const Point pb = phi_.spec.node(m);
    Point v = pa + t * (pb - pa);
    if (t == 0.0) v = pa;
    if (t == 1.0) v = pb;
    const Index id = static_cast<Index>(out_.size());
    out_.push_back(v);
    ids_.emplace(key, id);
    return id;
  }

 private:
  const ScalarField& phi_;
  double level_;
  std::vector<Point>& out_;
  std::unordered_map<Index, Index> ids_;
};

// Marching squares on one quad. Corners in cyclic order; edge k joins corner k and
// k+1, and `edge_vertex[k]` is its crossing vertex or -1.
template <typename Emit>
void march_quad(const std::array<double, 4>& value, const std::array<Index, 4>& edge_vertex,
                double level, Emit&& emit) {
  int crossings = 0;
  for (Index v : edge_vertex) crossings += v >= 0 ? 1 : 0;
  if (crossings == 2) {
    Index first = -1;
    for (Index v : edge_vertex) {
      if (v < 0) continue;
      if (first < 0) {
        first = v;
      } else {
        emit(first, v);
      }
    }
    return;
  }
  if (crossings != 4) return;
  const double mean = 0.25 * (value[0] + value[1] + value[2] + value[3]);
  const bool centre_positive = mean > level;
  for (int k = 0; k < 4; ++k) {
    if ((value[k] > level) != centre_positive) emit(edge_vertex[(k + 3) % 4], edge_vertex[k]);
  }
}

void extract_2d(const ScalarField& phi, double level, InterfaceSet& out) {
  const GridSpec& s = phi.spec;
  VertexPool pool(phi, level, out.vertices);
  for (int i = 0; i < s.cells(0); ++i) {
    for (int j = 0; j < s.cells(1); ++j) {
      const Index n0 = s.index(i, j);
      const Index n1 = s.index(i + 1, j);
      const Index n2 = s.index(i + 1, j + 1);
      const Index n3 = s.index(i, j + 1);
      const std::array<double, 4> v{phi[n0], phi[n1], phi[n2], phi[n3]};
      const std::array<Index, 4> e{pool.on_edge(n0, 0), pool.on_edge(n1, 1), pool.on_edge(n3, 0),
                                   pool.on_edge(n0, 1)};
      march_quad(v, e, level, [&](Index a, Index b) { out.segments.push_back({a, b}); });
    }
  }
}

// Procedural marching cubes: march each face, chain the face segments into closed
// loops (every crossing edge borders exactly two faces), and fan-triangulate.
// Faces shared by two cubes resolve saddles identically, so the surface is closed.
void extract_3d(const ScalarField& phi, double level, InterfaceSet& out) {
  const GridSpec& s = phi.spec;
  VertexPool pool(phi, level, out.vertices);
  // Faces as cyclic corner offsets (di, dj, dk).
  static constexpr std::array<std::array<std::array<int, 3>, 4>, 6> kFaces{{
      {{{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}}},
      {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}},
      {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}},
      {{{0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}}},
      {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}},
      {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}},
  }};
  std::vector<std::array<Index, 2>> segs;
  std::vector<Index> loop;
  for (int i = 0; i < s.cells(0); ++i) {
    for (int j = 0; j < s.cells(1); ++j) {
      for (int k = 0; k < s.cells(2); ++k) {
        segs.clear();
        for (const auto& face : kFaces) {
          std::array<double, 4> v{};
          std::array<Index, 4> nodes{};
          for (int c = 0; c < 4; ++c) {
            nodes[c] = s.index(i + face[c][0], j + face[c][1], k + face[c][2]);
            v[c] = phi[nodes[c]];
          }
          std::array<Index, 4> e{};
          for (int c = 0; c < 4; ++c) {
            const auto& a = face[c];
            const auto& b = face[(c + 1) % 4];
            int axis = 0;
            while (a[axis] == b[axis]) ++axis;
            const bool a_low = a[axis] < b[axis];
            e[c] = pool.on_edge(a_low ? nodes[c] : nodes[(c + 1) % 4], axis);
          }
          march_quad(v, e, level, [&](Index a, Index b) { segs.push_back({a, b}); });
        }
        if (segs.empty()) continue;
        std::vector<bool> used(segs.size(), false);
        for (std::size_t start = 0; start < segs.size(); ++start) {
          if (used[start]) continue;
          used[start] = true;
          loop.assign({segs[start][0], segs[start][1]});
          for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t q = 0; q < segs.size(); ++q) {
              if (used[q]) continue;
              const Index tail = loop.back();
              if (segs[q][0] == tail || segs[q][1] == tail) {
                used[q] = true;
                const Index next = segs[q][0] == tail ? segs[q][1] : segs[q][0];
                if (next != loop.front()) loop.push_back(next);
                grew = true;
              }
            }
          }
          for (std::size_t m = 1; m + 1 < loop.size(); ++m) {
            out.triangles.push_back({loop[0], loop[m], loop[m + 1]});
          }
        }
      }
    }
  }
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// Closest point on a triangle by Voronoi region tests.
double point_triangle_distance(const Point& p, const Point& a, const Point& b, const Point& c) {
  const Point ab = b - a;
  const Point ac = c - a;
  const Point ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const Point bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return point_segment_distance(p, a, b);
  const Point cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return point_segment_distance(p, a, c);
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) return point_segment_distance(p, b, c);
  const double denom = va + vb + vc;
  if (!(std::abs(denom) > 0.0)) {
    return std::min({point_segment_distance(p, a, b), point_segment_distance(p, a, c),
                     point_segment_distance(p, b, c)});
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return (p - (a + v * ab + w * ac)).norm();
}

}  // namespace

double distance_to_interface(const Point& p, const InterfaceSet& s) {
  double best = std::numeric_limits<double>::infinity();
  if (!s.segments.empty()) {
    for (const auto& e : s.segments) {
      best = std::min(best, point_segment_distance(p, s.vertices[e[0]], s.vertices[e[1]]));
    }
  } else if (!s.triangles.empty()) {
    for (const auto& t : s.triangles) {
      best = std::min(best,
                      point_triangle_distance(p, s.vertices[t[0]], s.vertices[t[1]], s.vertices[t[2]]));
    }
  } else {
    for (const Point& v : s.vertices) best = std::min(best, (p - v).norm());
  }
  return best;
}

double InterfaceSet::measure() const {
  double m = 0.0;
  for (const auto& e : segments) m += (vertices[e[1]] - vertices[e[0]]).norm();
  for (const auto& t : triangles) {
    m += 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
  }
  return m;
}

InterfaceSet extract_interface(const ScalarField& phi, double level) {
  InterfaceSet out;
  out.dim = phi.spec.dim();
  if (out.dim == 2) {
    extract_2d(phi, level, out);
  } else {
    extract_3d(phi, level, out);
  }
  return out;
}

RadiusEstimate radius_estimate(const InterfaceSet& s, const Point& center) {
  if (s.empty()) throw std::invalid_argument("radius_estimate: empty interface");
  RadiusEstimate r;
  r.min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const Point& v : s.vertices) {
    const double d = (v - center).norm();
    sum += d;
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
  }
  r.mean = sum / static_cast<double>(s.vertices.size());
  r.deviation = r.max - r.min;
  return r;
}

double hausdorff_distance(const InterfaceSet& a, const InterfaceSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty interface");
  double h = 0.0;
  for (const Point& v : a.vertices) h = std::max(h, distance_to_interface(v, b));
  for (const Point& v : b.vertices) h = std::max(h, distance_to_interface(v, a));
  return h;
}

}  // namespace actx
