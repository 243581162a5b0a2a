#pragma once
// Planar primitives for convex baseline-zone estimation.
//
// Conventions used throughout:
//  - polygons are closed convex sets stored as CCW vertex lists, canonicalized
//    so the lexicographically smallest vertex comes first; degenerate polygons
//    (empty set, single point, segment) are permitted and flagged,
//  - boundary points count as inside (closed-set semantics) up to eps_geom,
//  - set distances (fatten/thin, Hausdorff) use the l-infinity metric.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bzone {

inline constexpr double eps_geom = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Point& a, const Point& b) { return !(a == b); }

// Lexicographic order, x then y; total on distinct points.
inline bool lex_less(const Point& a, const Point& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Twice the signed area of triangle (o, a, b); positive when (o,a,b) is CCW.
inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double dist_linf(const Point& a, const Point& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Snaps a coordinate to the 2^-19 grid (resolution about 1.9e-6). On snapped
// inputs with |x| < 64 every coordinate difference, cross product and squared
// length used by the predicates below is an integer multiple of a power of
// two and evaluates exactly in doubles, and the smallest nonzero determinant
// (2^-38) clears eps_geom; angular comparisons then form true total orders.
// Unsnapped coordinates make near-collinear comparisons intransitive, which
// breaks the optimizer's ray-group bookkeeping, so optimizer inputs are
// snapped at construction.
inline double snap_coord(double x) { return std::round(x * 524288.0) * (1.0 / 524288.0); }

inline Point snap_point(const Point& p) { return Point{snap_coord(p.x), snap_coord(p.y)}; }

enum class OrientationSign { Negative = -1, Zero = 0, Positive = 1 };

// Determinant sign with |det| <= eps_geom collapsed to Zero.
inline OrientationSign orientation(const Point& a, const Point& b, const Point& c) {
  const double d = cross(a, b, c);
  if (d > eps_geom) return OrientationSign::Positive;
  if (d < -eps_geom) return OrientationSign::Negative;
  return OrientationSign::Zero;
}

// l-infinity distance from p to the closed segment [a, b].
// The objective max(|px-x(t)|, |py-y(t)|) is convex piecewise linear in t,
// so its minimum over [0,1] is attained at an endpoint, at a kink of either
// absolute term, or where the two terms cross; all are checked exactly.
inline double dist_linf_point_segment(const Point& p, const Point& a, const Point& b) {
  const double ux = b.x - a.x, uy = b.y - a.y;
  const double px = p.x - a.x, py = p.y - a.y;
  double best = std::numeric_limits<double>::infinity();
  auto eval = [&](double t) {
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::max(std::abs(px - t * ux), std::abs(py - t * uy)));
  };
  eval(0.0);
  eval(1.0);
  if (ux != 0.0) eval(px / ux);
  if (uy != 0.0) eval(py / uy);
  if (ux - uy != 0.0) eval((px - py) / (ux - uy));
  if (ux + uy != 0.0) eval((px + py) / (ux + uy));
  return best;
}

// Closed convex polygon. Invariants: vertices CCW, no duplicate or collinear
// consecutive vertices, first vertex lexicographically smallest. Degenerate
// cases: 0 vertices = empty set, 1 = point, 2 = segment.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  // Builds from arbitrary points via their convex hull.
  static ConvexPolygon hull_of(std::vector<Point> pts);

  // Builds from a vertex list that must already be convex and CCW (any
  // starting vertex, duplicates/collinear runs tolerated and removed).
  // Throws std::invalid_argument on a clockwise or non-convex list.
  static ConvexPolygon from_ccw_vertices(const std::vector<Point>& verts);

  const std::vector<Point>& vertices() const { return verts_; }
  std::size_t vertex_count() const { return verts_.size(); }
  bool is_empty() const { return verts_.empty(); }
  bool is_point() const { return verts_.size() == 1; }
  bool is_segment() const { return verts_.size() == 2; }

  double area() const {
    if (verts_.size() < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      const Point& a = verts_[i];
      const Point& b = verts_[(i + 1) % verts_.size()];
      s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
  }

  // Closed-set membership; boundary within eps counts as inside.
  bool contains(const Point& q, double eps = eps_geom) const {
    if (verts_.empty()) return false;
    if (verts_.size() == 1) return dist_linf(q, verts_[0]) <= eps;
    if (verts_.size() == 2) return dist_linf_point_segment(q, verts_[0], verts_[1]) <= eps;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      const Point& a = verts_[i];
      const Point& b = verts_[(i + 1) % verts_.size()];
      if (cross(a, b, q) < -eps) return false;
    }
    return true;
  }

  bool operator==(const ConvexPolygon& o) const { return verts_ == o.verts_; }
  bool operator!=(const ConvexPolygon& o) const { return verts_ != o.verts_; }

 private:
  explicit ConvexPolygon(std::vector<Point> v) : verts_(std::move(v)) {}
  void canonicalize_start();
  std::vector<Point> verts_;
};

inline void ConvexPolygon::canonicalize_start() {
  if (verts_.size() < 2) return;
  std::size_t lo = 0;
  for (std::size_t i = 1; i < verts_.size(); ++i)
    if (lex_less(verts_[i], verts_[lo])) lo = i;
  std::rotate(verts_.begin(), verts_.begin() + static_cast<std::ptrdiff_t>(lo), verts_.end());
}

// Monotone chain with strict turns: collinear interior points are dropped, so
// the hull is the minimal vertex list and is invariant under input
// permutation and duplication.
inline ConvexPolygon ConvexPolygon::hull_of(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return ConvexPolygon(std::move(pts));
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {  // lower hull
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {  // upper hull
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  ConvexPolygon poly(std::move(h));
  poly.canonicalize_start();
  return poly;
}

inline ConvexPolygon ConvexPolygon::from_ccw_vertices(const std::vector<Point>& verts) {
  // Remove exact duplicates, then collinear middles; validate turn signs.
  std::vector<Point> v;
  for (const Point& p : verts)
    if (v.empty() || p != v.back()) v.push_back(p);
  while (v.size() > 1 && v.front() == v.back()) v.pop_back();
  if (v.size() >= 3) {
    std::vector<Point> w;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& prev = v[(i + n - 1) % n];
      const Point& cur = v[i];
      const Point& next = v[(i + 1) % n];
      const double c = cross(prev, cur, next);
      if (c < -eps_geom) throw std::invalid_argument("from_ccw_vertices: clockwise turn");
      if (c > eps_geom) w.push_back(cur);
    }
    if (w.size() >= 3) {
      ConvexPolygon poly(std::move(w));
      poly.canonicalize_start();
      return poly;
    }
    // All vertices collinear: degrade to the extreme segment.
    auto [lo, hi] = std::minmax_element(v.begin(), v.end(), lex_less);
    if (*lo == *hi) return ConvexPolygon({*lo});
    return ConvexPolygon({*lo, *hi});
  }
  ConvexPolygon poly(std::move(v));
  poly.canonicalize_start();
  return poly;
}

inline ConvexPolygon convex_hull(const std::vector<Point>& pts) {
  return ConvexPolygon::hull_of(pts);
}

namespace detail {

// Clips a CCW vertex loop to the closed half-plane left of the directed line
// a->b (Sutherland-Hodgman step). Works on raw loops; degeneracies are
// resolved by the caller via hull/area computations.
inline std::vector<Point> clip_halfplane(const std::vector<Point>& poly, const Point& a,
                                         const Point& b) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double sp = cross(a, b, p);
    const double sq = cross(a, b, q);
    const bool pin = sp >= -eps_geom;
    const bool qin = sq >= -eps_geom;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = sp / (sp - sq);  // sp != sq since signs differ beyond eps
      out.push_back(Point{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

inline double loop_area(const std::vector<Point>& v) {
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

}  // namespace detail

// Area of the intersection of two closed convex polygons (0 when either is
// degenerate). Computed by successive half-plane clipping.
inline double intersection_area(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  if (p1.vertex_count() < 3 || p2.vertex_count() < 3) return 0.0;
  std::vector<Point> cur = p1.vertices();
  const auto& v2 = p2.vertices();
  for (std::size_t i = 0; i < v2.size() && !cur.empty(); ++i)
    cur = detail::clip_halfplane(cur, v2[i], v2[(i + 1) % v2.size()]);
  return std::max(0.0, detail::loop_area(cur));
}

// Lebesgue measure of the symmetric difference.
inline double symmetric_difference_area(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  return std::max(0.0, p1.area() + p2.area() - 2.0 * intersection_area(p1, p2));
}

// Minkowski fattening by the closed l-infinity ball of radius delta.
inline ConvexPolygon fatten_linf(const ConvexPolygon& poly, double delta) {
  if (delta < 0.0) throw std::invalid_argument("fatten_linf: negative delta");
  if (poly.is_empty() || delta == 0.0) return poly;
  std::vector<Point> pts;
  pts.reserve(4 * poly.vertex_count());
  for (const Point& v : poly.vertices())
    for (double sx : {-delta, delta})
      for (double sy : {-delta, delta}) pts.push_back(Point{v.x + sx, v.y + sy});
  return ConvexPolygon::hull_of(std::move(pts));
}

// l-infinity erosion: { x : dist(x, complement) >= delta }. May be empty.
inline ConvexPolygon thin_linf(const ConvexPolygon& poly, double delta) {
  if (delta < 0.0) throw std::invalid_argument("thin_linf: negative delta");
  if (delta == 0.0) return poly;
  if (poly.vertex_count() < 3) return ConvexPolygon{};  // measure-zero sets erode away
  std::vector<Point> cur = poly.vertices();
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size() && !cur.empty(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    // Outward normal of CCW edge is (dy, -dx); the support function of the
    // delta-square in that direction is delta * (|nx| + |ny|), so the edge
    // line shifts inward by the vector s with n.s = -delta(|nx|+|ny|).
    const double nx = b.y - a.y, ny = a.x - b.x;
    const double sx = -delta * (nx > 0 ? 1.0 : (nx < 0 ? -1.0 : 0.0));
    const double sy = -delta * (ny > 0 ? 1.0 : (ny < 0 ? -1.0 : 0.0));
    const Point a2{a.x + sx, a.y + sy}, b2{b.x + sx, b.y + sy};
    cur = detail::clip_halfplane(cur, a2, b2);
  }
  return ConvexPolygon::hull_of(std::move(cur));
}

// Fattening and thinning as a pair (S^delta, S_delta).
inline std::pair<ConvexPolygon, ConvexPolygon> fatten_thin(const ConvexPolygon& poly,
                                                           double delta) {
  return {fatten_linf(poly, delta), thin_linf(poly, delta)};
}

// l-infinity distance from a point to a closed convex polygon (0 inside).
inline double dist_linf_point_polygon(const Point& p, const ConvexPolygon& poly) {
  if (poly.is_empty()) throw std::invalid_argument("dist_linf_point_polygon: empty set");
  if (poly.is_point()) return dist_linf(p, poly.vertices()[0]);
  if (poly.contains(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
    best = std::min(best, dist_linf_point_segment(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

// Hausdorff distance in the l-infinity metric. Distance-to-set is convex, so
// the supremum over each polygon is attained at one of its vertices.
// Throws on empty operands (the distance is undefined there).
inline double hausdorff_linf(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  if (p1.is_empty() || p2.is_empty())
    throw std::invalid_argument("hausdorff_linf: empty operand");
  double h = 0.0;
  for (const Point& v : p1.vertices()) h = std::max(h, dist_linf_point_polygon(v, p2));
  for (const Point& v : p2.vertices()) h = std::max(h, dist_linf_point_polygon(v, p1));
  return h;
}

}  // namespace bzone
