#pragma once
// Exact minimization of the stump criterion over convex polygons with
// vertices at sample points. For every choice of base vertex (the leftmost
// vertex of the polygon under lexicographic order), chains of triangles
// anchored at the base are optimized by dynamic programming over fan ranks;
// the final estimate is the best polygon over all bases, the chords, the
// single points, and the empty set.
//
// Correctness notes that drive the structure below:
//  - A polygon whose leftmost vertex is b contains no sample point that is
//    lexicographically smaller than b, so each base's candidate point set is
//    a suffix of the lex-sorted sample.
//  - Removing a positive-weight vertex from the generating set of a hull
//    removes exactly that point from the included set, so some optimal
//    polygon has all its vertices at nonpositive-weight points. Bases and
//    chain targets are therefore restricted to negative-weight points, and
//    the sample can be clipped to the hull of the negative points, without
//    changing the optimum.
//  - With fan points ordered counterclockwise around the base (collinear
//    runs nearest first), every direction that matters at a pivot j lies in
//    the half circle starting at the base ray through j, so turn
//    admissibility (D >= 0) is a prefix condition on angles and each
//    column's usable history is a value staircase over in-edge angles.
//  - The closing turn back to the base is convex automatically: for ranks
//    j < k, cross(v_k - v_j, b - v_k) = cross(v_j - b, v_k - b) >= 0.
//  - The mass of a triangle increment at round j (triangle (b, j, k) minus
//    the chord [b, j]) is the sum of weights of points c strictly after j's
//    ray group whose direction from j is angularly at or after the edge
//    direction j -> k and whose fan rank is at most k's. This makes the
//    whole round computable with one angular sweep and a Fenwick tree over
//    ranks, and gives closed-polygon inclusion with every point counted
//    exactly once (verified against independent point classification).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bzone/geometry.hpp"
#include "bzone/stump.hpp"

namespace bzone {

struct OptimizerResult {
  ConvexPolygon polygon;
  std::vector<std::size_t> included_indices;  // original sample indices, sorted
  double criterion = 0.0;
  std::ptrdiff_t base_vertex = -1;           // original index of the base, -1 if empty
  std::vector<std::size_t> vertex_chain;     // base-first vertex indices (original)
  double elapsed_ms = 0.0;
};

namespace dpdetail {

inline double cross_dir(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }

// Duplicate coordinates merged with summed weights; points in lex order.
struct Merged {
  std::vector<Point> pts;
  std::vector<double> w;
  std::vector<std::vector<std::size_t>> orig;
  double denom = 0.0;
};

inline Merged merge_sample(const WeightedSample& sample) {
  const std::size_t n = sample.points.size();
  // Coordinates are snapped so every predicate downstream is exact; points
  // landing on the same grid cell merge with summed weights.
  std::vector<Point> snapped(n);
  for (std::size_t i = 0; i < n; ++i) snapped[i] = snap_point(sample.points[i]);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (snapped[a] != snapped[b]) return lex_less(snapped[a], snapped[b]);
    return a < b;
  });
  Merged m;
  m.denom = sample.denom;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = idx[t];
    if (!m.pts.empty() && m.pts.back() == snapped[i]) {
      m.w.back() += sample.weights[i];
      m.orig.back().push_back(i);
    } else {
      m.pts.push_back(snapped[i]);
      m.w.push_back(sample.weights[i]);
      m.orig.push_back({i});
    }
  }
  return m;
}

// Best candidate seen so far: raw weight sum plus the vertex chain that
// realizes it (merged indices, base first). Ties prefer fewer included
// points, then the lexicographically smallest included index set.
struct Best {
  double raw = std::numeric_limits<double>::infinity();
  bool is_empty_set = false;
  int base = -1;
  std::vector<int> chain;  // merged ids after the base
};

inline ConvexPolygon chain_polygon(const Merged& m, int base, const std::vector<int>& chain) {
  std::vector<Point> pts;
  pts.reserve(chain.size() + 1);
  pts.push_back(m.pts[static_cast<std::size_t>(base)]);
  for (int id : chain) pts.push_back(m.pts[static_cast<std::size_t>(id)]);
  return convex_hull(pts);
}

inline std::vector<int> included_merged(const Merged& m, const ConvexPolygon& poly) {
  std::vector<int> ids;
  for (std::size_t i = 0; i < m.pts.size(); ++i)
    if (poly.contains(m.pts[i])) ids.push_back(static_cast<int>(i));
  return ids;
}

// True when candidate (base2, chain2) is preferred over the incumbent at an
// exactly equal raw value.
inline bool tie_prefers(const Merged& m, const Best& inc, int base2,
                        const std::vector<int>& chain2) {
  if (inc.is_empty_set) return false;  // empty set already has zero points
  const std::vector<int> a = included_merged(m, chain_polygon(m, inc.base, inc.chain));
  const std::vector<int> b = included_merged(m, chain_polygon(m, base2, chain2));
  if (a.size() != b.size()) return b.size() < a.size();
  return b < a;
}

#ifdef BZONE_DP_STATS
struct DpStats {
  long fans = 0;
  long rounds = 0;
  long rounds_skipped = 0;
  long events = 0;
  long inserts = 0;
};
inline DpStats& dp_stats() {
  static DpStats s;
  return s;
}
#define BZONE_DP_COUNT(field, amount) (dp_stats().field += (amount))
#else
#define BZONE_DP_COUNT(field, amount) ((void)0)
#endif

struct ArenaNode {
  int vertex;  // merged id
  long pred;   // arena id, or seed encoding (see below)
};

// Seed in-edges (chords from the base) are encoded as negative ids to avoid
// allocating arena nodes for every fan point: id = -(rank) - 2. The id -1
// stands for "no chain" (a single-point polygon).
constexpr long kNoChain = -1;
constexpr long kSeedBias = -2;
inline long seed_id(int rank) { return kSeedBias - rank; }
inline bool is_seed(long id) { return id <= kSeedBias; }
inline int seed_rank(long id) { return static_cast<int>(kSeedBias - id); }

struct Stair {
  Point dir;   // in-edge direction at this column (v_col - v_from)
  double val;  // best raw chain value ending with that edge
  long id;     // arena id or seed encoding
};

struct FanWs {
  std::vector<int> order;                 // rank -> merged id
  std::vector<Point> dir;                 // rank -> direction from base
  std::vector<double> wr;                 // rank -> weight
  std::vector<int> group_end;             // rank -> one past its ray group
  std::vector<double> chord;              // rank -> closed chord [base, rank] sum
  std::vector<double> neg_suffix;         // rank -> sum of negative weights at >= rank
  std::vector<std::vector<Stair>> cols;   // rank -> in-edge staircase
  std::vector<double> col_min;            // rank -> min staircase value
  std::vector<ArenaNode> arena;
  std::vector<std::vector<int>> polar;    // merged id -> full angular order, lazy
  std::vector<unsigned char> polar_ready;
  std::vector<int> rank_of;               // merged id -> fan rank, -1 outside fan
  std::vector<int> events;                // round scratch: U offsets by angle
  std::vector<int> events2;               // round scratch: wrapped tail of the arc
  std::vector<Point> edir;                // round scratch: directions from pivot
  std::vector<double> fenwick;            // round scratch: rank-prefix sums
  std::vector<double> in_val;             // round scratch: per-offset in values
  std::vector<long> in_id;                // round scratch: per-offset in arena ids
};

// Full-turn angular order on directions: upper half plane (+x axis included)
// before lower (-x included), counterclockwise within a half. Equal
// directions compare equal so callers keep them adjacent.
inline int polar_dir_cmp(const Point& da, const Point& dc) {
  const bool lowa = (da.y < 0.0) || (da.y == 0.0 && da.x < 0.0);
  const bool lowc = (dc.y < 0.0) || (dc.y == 0.0 && dc.x < 0.0);
  if (lowa != lowc) return lowa ? 1 : -1;
  const double cr = cross_dir(da, dc);
  if (cr != 0.0) return cr > 0.0 ? -1 : 1;
  return 0;
}

// Angular order of every other merged point around `pid`, built on first use
// and shared by all fans: the circular order around a pivot does not depend
// on the fan base. Memory is quadratic in the merged size, which the cubic
// optimization cost caps well before it matters.
inline const std::vector<int>& pivot_polar(const Merged& m, FanWs& ws, int pid) {
  std::vector<int>& tab = ws.polar[static_cast<std::size_t>(pid)];
  if (ws.polar_ready[static_cast<std::size_t>(pid)]) return tab;
  const int n = static_cast<int>(m.pts.size());
  tab.clear();
  tab.reserve(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i)
    if (i != pid) tab.push_back(i);
  const Point o = m.pts[static_cast<std::size_t>(pid)];
  std::sort(tab.begin(), tab.end(), [&](int a, int c) {
    const Point da{m.pts[(std::size_t)a].x - o.x, m.pts[(std::size_t)a].y - o.y};
    const Point dc{m.pts[(std::size_t)c].x - o.x, m.pts[(std::size_t)c].y - o.y};
    const int cmp = polar_dir_cmp(da, dc);
    if (cmp != 0) return cmp < 0;
    return a < c;
  });
  ws.polar_ready[static_cast<std::size_t>(pid)] = 1;
  return tab;
}

inline void fenwick_add(std::vector<double>& f, int pos, double v) {
  for (int i = pos + 1; i < static_cast<int>(f.size()); i += i & (-i)) f[i] += v;
}

inline double fenwick_prefix(const std::vector<double>& f, int pos) {
  double s = 0.0;
  for (int i = pos + 1; i > 0; i -= i & (-i)) s += f[i];
  return s;
}

// Walks backpointers into a base-first chain of merged ids (base excluded).
inline std::vector<int> materialize_chain(const FanWs& ws, long id) {
  std::vector<int> out;
  while (id != kNoChain) {
    if (is_seed(id)) {
      out.push_back(ws.order[static_cast<std::size_t>(seed_rank(id))]);
      break;
    }
    const ArenaNode& node = ws.arena[static_cast<std::size_t>(id)];
    out.push_back(node.vertex);
    id = node.pred;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline void offer(const Merged& m, Best& best, double raw, int base, long id, const FanWs& ws) {
  if (raw > best.raw) return;
  std::vector<int> chain = materialize_chain(ws, id);
  if (raw == best.raw && !tie_prefers(m, best, base, chain)) return;
  best.raw = raw;
  best.is_empty_set = false;
  best.base = base;
  best.chain = std::move(chain);
}

// Optimizes all convex chains anchored at merged point `b` (which must be
// admissible as a leftmost vertex for them, i.e. chains use only points
// lexicographically after it). Improves `best` in place; prunes against the
// current best value, which is exact since pruned candidates cannot beat an
// already achievable value.
inline void run_fan(const Merged& m, int b, FanWs& ws, Best& best) {
  BZONE_DP_COUNT(fans, 1);
  const int n = static_cast<int>(m.pts.size());
  const Point pb = m.pts[static_cast<std::size_t>(b)];
  offer(m, best, m.w[static_cast<std::size_t>(b)], b, kNoChain, ws);  // single point {b}
  const int f = n - b - 1;
  if (f <= 0) return;

  if (ws.polar.size() != static_cast<std::size_t>(n)) {
    ws.polar.assign(static_cast<std::size_t>(n), {});
    ws.polar_ready.assign(static_cast<std::size_t>(n), 0);
  }
  ws.order.resize(static_cast<std::size_t>(f));
  for (int r = 0; r < f; ++r) ws.order[static_cast<std::size_t>(r)] = b + 1 + r;
  ws.dir.resize(static_cast<std::size_t>(f));
  std::sort(ws.order.begin(), ws.order.end(), [&](int a, int c) {
    const Point da{m.pts[(std::size_t)a].x - pb.x, m.pts[(std::size_t)a].y - pb.y};
    const Point dc{m.pts[(std::size_t)c].x - pb.x, m.pts[(std::size_t)c].y - pb.y};
    const double cr = cross_dir(da, dc);
    if (cr != 0.0) return cr > 0.0;
    const double la = da.x * da.x + da.y * da.y, lc = dc.x * dc.x + dc.y * dc.y;
    if (la != lc) return la < lc;  // same ray: nearest first
    return a < c;
  });

  ws.wr.resize(static_cast<std::size_t>(f));
  ws.group_end.resize(static_cast<std::size_t>(f));
  ws.chord.resize(static_cast<std::size_t>(f));
  ws.neg_suffix.resize(static_cast<std::size_t>(f) + 1);
  if (ws.cols.size() < static_cast<std::size_t>(f)) ws.cols.resize(static_cast<std::size_t>(f));
  ws.col_min.resize(static_cast<std::size_t>(f));
  ws.arena.clear();

  ws.rank_of.assign(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < f; ++r) {
    const int id = ws.order[static_cast<std::size_t>(r)];
    ws.rank_of[(std::size_t)id] = r;
    ws.dir[(std::size_t)r] = Point{m.pts[(std::size_t)id].x - pb.x, m.pts[(std::size_t)id].y - pb.y};
    ws.wr[(std::size_t)r] = m.w[(std::size_t)id];
  }
  // Ray groups and closed-chord prefix sums.
  for (int r = 0; r < f;) {
    int e = r + 1;
    while (e < f && cross_dir(ws.dir[(std::size_t)r], ws.dir[(std::size_t)e]) == 0.0) ++e;
    double acc = m.w[static_cast<std::size_t>(b)];
    for (int t = r; t < e; ++t) {
      acc += ws.wr[(std::size_t)t];
      ws.chord[(std::size_t)t] = acc;
      ws.group_end[(std::size_t)t] = e;
    }
    r = e;
  }
  ws.neg_suffix[static_cast<std::size_t>(f)] = 0.0;
  for (int r = f - 1; r >= 0; --r)
    ws.neg_suffix[(std::size_t)r] =
        ws.neg_suffix[(std::size_t)r + 1] + (ws.wr[(std::size_t)r] < 0.0 ? ws.wr[(std::size_t)r] : 0.0);

  // Seed every column with its chord; chords are complete polygons already.
  for (int r = 0; r < f; ++r) {
    ws.cols[(std::size_t)r].clear();
    ws.cols[(std::size_t)r].push_back(Stair{ws.dir[(std::size_t)r], ws.chord[(std::size_t)r], seed_id(r)});
    ws.col_min[(std::size_t)r] = ws.chord[(std::size_t)r];
    if (ws.chord[(std::size_t)r] <= best.raw)
      offer(m, best, ws.chord[(std::size_t)r], b, seed_id(r), ws);
  }

  for (int j = 0; j < f; ++j) {
    const int ue = ws.group_end[(std::size_t)j];
    if (ue >= f) continue;
    // A strictly optimal polygon never has a nonnegative-weight vertex
    // (dropping it from the generating set removes exactly that point), and
    // on ties the smaller included set is preferred, so chains never need to
    // pass through a nonnegative pivot.
    if (ws.wr[(std::size_t)j] >= 0.0) continue;
    if (ws.col_min[(std::size_t)j] + ws.neg_suffix[(std::size_t)ue] >= best.raw) {
      BZONE_DP_COUNT(rounds_skipped, 1);
      continue;
    }
    BZONE_DP_COUNT(rounds, 1);
    const int pj_id = ws.order[(std::size_t)j];
    const Point pj = m.pts[(std::size_t)pj_id];
    const int u = f - ue;
    BZONE_DP_COUNT(events, u);

    // Event extraction from the pivot's shared polar table. Every suffix
    // member sits strictly left of the base ray through the pivot, so the
    // events occupy one circular arc of the table; splitting at the table's
    // +x cut restores ascending angle from the ray, equal directions staying
    // adjacent. This replaces a per-round comparison sort with a linear scan.
    const std::vector<int>& pol = pivot_polar(m, ws, pj_id);
    const Point u0 = ws.dir[(std::size_t)j];
    ws.edir.resize(static_cast<std::size_t>(u));
    ws.events.clear();
    ws.events2.clear();
    for (const int idx : pol) {
      const int r = ws.rank_of[(std::size_t)idx];
      if (r < ue) continue;
      const Point d{m.pts[(std::size_t)idx].x - pj.x, m.pts[(std::size_t)idx].y - pj.y};
      const int off = r - ue;
      ws.edir[(std::size_t)off] = d;
      if (polar_dir_cmp(u0, d) < 0)
        ws.events.push_back(off);
      else
        ws.events2.push_back(off);  // wrapped past the cut, angularly last
    }
    ws.events.insert(ws.events.end(), ws.events2.begin(), ws.events2.end());
#ifdef BZONE_DP_VERIFY_EVENTS
    {
      std::vector<int> ref(static_cast<std::size_t>(u));
      for (int t = 0; t < u; ++t) ref[(std::size_t)t] = t;
      std::sort(ref.begin(), ref.end(), [&](int a, int c) {
        const double cr = cross_dir(ws.edir[(std::size_t)a], ws.edir[(std::size_t)c]);
        if (cr != 0.0) return cr > 0.0;
        return a < c;
      });
      bool ok = ws.events.size() == ref.size();
      for (std::size_t t = 0; ok && t < ref.size(); ++t) {
        const Point& da = ws.edir[(std::size_t)ws.events[t]];
        const Point& dc = ws.edir[(std::size_t)ref[t]];
        ok = cross_dir(da, dc) == 0.0 && da.x * dc.x + da.y * dc.y > 0.0;
      }
      if (!ok) {
        std::fprintf(stderr, "event order mismatch: b=%d j=%d ue=%d u=%d u0=(%.17g,%.17g)\n", b, j,
                     ue, u, u0.x, u0.y);
        const std::size_t lim = ws.events.size() < ref.size() ? ws.events.size() : ref.size();
        for (std::size_t t = 0; t < lim; ++t) {
          const Point& da = ws.edir[(std::size_t)ws.events[t]];
          const Point& dc = ws.edir[(std::size_t)ref[t]];
          if (cross_dir(da, dc) != 0.0 || da.x * dc.x + da.y * dc.y <= 0.0)
            std::fprintf(stderr,
                         "  t=%zu polar off=%d d=(%.17g,%.17g) legacy off=%d d=(%.17g,%.17g)\n", t,
                         ws.events[t], da.x, da.y, ref[t], dc.x, dc.y);
        }
        std::abort();
      }
    }
#endif

    // Pass A: per negative target, the admissible-history minimum, by
    // ascending angle against the column staircase (values decrease along
    // the staircase, so the last admissible entry is the minimum).
    const std::vector<Stair>& stair = ws.cols[(std::size_t)j];
    ws.in_val.resize(static_cast<std::size_t>(u));
    ws.in_id.resize(static_cast<std::size_t>(u));
    std::size_t sp = 0;
    for (int t = 0; t < u; ++t) {
      const int off = ws.events[(std::size_t)t];
      if (ws.wr[(std::size_t)(ue + off)] >= 0.0) continue;
      while (sp + 1 < stair.size() &&
             cross_dir(stair[sp + 1].dir, ws.edir[(std::size_t)off]) >= 0.0)
        ++sp;
      ws.in_val[(std::size_t)off] = stair[sp].val;
      ws.in_id[(std::size_t)off] = stair[sp].id;
    }

    // Pass B: descending angle; masses at or after the query angle enter a
    // Fenwick tree over fan ranks, queried at the target's rank prefix.
    // Equal angles resolve adds before queries (closed-edge semantics).
    ws.fenwick.assign(static_cast<std::size_t>(u) + 1, 0.0);
    for (int i = u - 1; i >= 0;) {
      int g = i;
      while (g > 0 && cross_dir(ws.edir[(std::size_t)ws.events[(std::size_t)(g - 1)]],
                                ws.edir[(std::size_t)ws.events[(std::size_t)i]]) == 0.0)
        --g;
      for (int t = g; t <= i; ++t) {
        const int off = ws.events[(std::size_t)t];
        fenwick_add(ws.fenwick, off, ws.wr[(std::size_t)(ue + off)]);
      }
      for (int t = g; t <= i; ++t) {
        const int off = ws.events[(std::size_t)t];
        if (ws.wr[(std::size_t)(ue + off)] >= 0.0) continue;
        const int kr = ue + off;
        const double raw = ws.in_val[(std::size_t)off] + fenwick_prefix(ws.fenwick, off);
        if (raw <= best.raw) {
          ws.arena.push_back(ArenaNode{ws.order[(std::size_t)kr], ws.in_id[(std::size_t)off]});
          offer(m, best, raw, b, static_cast<long>(ws.arena.size()) - 1, ws);
          ws.arena.pop_back();
        }
        if (raw + ws.neg_suffix[(std::size_t)ws.group_end[(std::size_t)kr]] >= best.raw)
          continue;  // no extension through kr can beat the incumbent
        BZONE_DP_COUNT(inserts, 1);
        // Staircase insert at column kr, keyed by the edge direction.
        std::vector<Stair>& col = ws.cols[(std::size_t)kr];
        const Point d = ws.edir[(std::size_t)off];
        std::size_t lo = col.size();
        for (std::size_t s = 0; s < col.size(); ++s)
          if (cross_dir(d, col[s].dir) > 0.0) { lo = s; break; }
        if (lo > 0 && col[lo - 1].val <= raw) continue;  // dominated
        ws.arena.push_back(ArenaNode{ws.order[(std::size_t)kr], ws.in_id[(std::size_t)off]});
        const long id = static_cast<long>(ws.arena.size()) - 1;
        std::size_t hi = lo;
        while (hi < col.size() && col[hi].val >= raw) ++hi;
        col.erase(col.begin() + static_cast<std::ptrdiff_t>(lo),
                  col.begin() + static_cast<std::ptrdiff_t>(hi));
        col.insert(col.begin() + static_cast<std::ptrdiff_t>(lo), Stair{d, raw, id});
        if (raw < ws.col_min[(std::size_t)kr]) ws.col_min[(std::size_t)kr] = raw;
      }
      i = g - 1;
    }
  }
}

inline OptimizerResult finalize(const Merged& m, const Best& best, double denom) {
  OptimizerResult r;
  if (best.is_empty_set || !std::isfinite(best.raw)) {
    r.criterion = 0.0;
    return r;
  }
  r.criterion = best.raw / denom;
  r.polygon = chain_polygon(m, best.base, best.chain);
  r.base_vertex = static_cast<std::ptrdiff_t>(m.orig[(std::size_t)best.base].front());
  // The polygon stores vertices counterclockwise from its lexicographic
  // minimum, which is the base, so the canonical chain is read off directly.
  for (const Point& v : r.polygon.vertices()) {
    const auto it = std::lower_bound(m.pts.begin(), m.pts.end(), v,
                                     [](const Point& a, const Point& b) { return lex_less(a, b); });
    r.vertex_chain.push_back(m.orig[(std::size_t)(it - m.pts.begin())].front());
  }
  for (int id : included_merged(m, r.polygon))
    for (std::size_t o : m.orig[(std::size_t)id]) r.included_indices.push_back(o);
  std::sort(r.included_indices.begin(), r.included_indices.end());
  return r;
}

}  // namespace dpdetail

// Weight sum over the closed triangle (base, i, j) minus the closed segment
// [base, i], divided by the sample denominator: the DP's triangle increment,
// computed here by direct point classification. Degenerate (collinear)
// triangles reduce to a segment difference. Throws if (base, i, j) is
// clockwise.
inline double triangle_measure(const WeightedSample& sample, std::size_t base, std::size_t i,
                               std::size_t j) {
  if (base == i || base == j || i == j)
    throw std::invalid_argument("triangle_measure: indices must be distinct");
  const Point a = sample.points[base], p = sample.points[i], q = sample.points[j];
  if (orientation(a, p, q) == OrientationSign::Negative)
    throw std::invalid_argument("triangle_measure: clockwise triangle");
  const auto on_closed_segment = [](const Point& s, const Point& t, const Point& c) {
    if (dpdetail::cross_dir(Point{t.x - s.x, t.y - s.y}, Point{c.x - s.x, c.y - s.y}) != 0.0)
      return false;
    return c.x >= std::min(s.x, t.x) && c.x <= std::max(s.x, t.x) &&
           c.y >= std::min(s.y, t.y) && c.y <= std::max(s.y, t.y);
  };
  const double area2 = cross(a, p, q);
  double acc = 0.0;
  for (std::size_t t = 0; t < sample.points.size(); ++t) {
    const Point& c = sample.points[t];
    bool in_shape;
    if (area2 == 0.0) {
      in_shape = on_closed_segment(a, p, c) || on_closed_segment(a, q, c) ||
                 on_closed_segment(p, q, c);
    } else {
      in_shape = cross(a, p, c) >= 0.0 && cross(p, q, c) >= 0.0 && cross(q, a, c) >= 0.0;
    }
    if (in_shape && !on_closed_segment(a, p, c)) acc += sample.weights[t];
  }
  return acc / sample.denom;
}

// Minimum-criterion convex polygon whose leftmost (lexicographic) vertex is
// sample point `base`, over the points not lexicographically before it.
inline OptimizerResult optimize_fan(const WeightedSample& sample, std::size_t base) {
  const auto t0 = std::chrono::steady_clock::now();
  if (base >= sample.points.size()) throw std::invalid_argument("optimize_fan: bad base");
  dpdetail::Merged m = dpdetail::merge_sample(sample);
  const Point pb = snap_point(sample.points[base]);
  int bm = -1;
  for (std::size_t i = 0; i < m.pts.size(); ++i)
    if (m.pts[i] == pb) bm = static_cast<int>(i);
  dpdetail::FanWs ws;
  dpdetail::Best best;
  dpdetail::run_fan(m, bm, ws, best);
  OptimizerResult r = dpdetail::finalize(m, best, m.denom);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Global minimizer of the criterion over closed convex sets: best over all
// bases, plus the empty set at criterion zero.
inline OptimizerResult estimate_set(const WeightedSample& sample) {
  const auto t0 = std::chrono::steady_clock::now();
  dpdetail::Merged full = dpdetail::merge_sample(sample);

  std::vector<Point> neg_pts;
  for (std::size_t i = 0; i < full.pts.size(); ++i)
    if (full.w[i] < 0.0) neg_pts.push_back(full.pts[i]);
  dpdetail::Best best;
  best.raw = 0.0;
  best.is_empty_set = true;
  if (neg_pts.empty()) {
    OptimizerResult r = dpdetail::finalize(full, best, full.denom);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

  // Clip to the hull of the negative points: no optimal polygon reaches
  // outside it. Inclusion is tested with the closed tolerance so only
  // definitely-outside points are dropped.
  const ConvexPolygon hull_neg = convex_hull(neg_pts);
  dpdetail::Merged m;
  m.denom = full.denom;
  for (std::size_t i = 0; i < full.pts.size(); ++i) {
    if (!hull_neg.contains(full.pts[i])) continue;
    m.pts.push_back(full.pts[i]);
    m.w.push_back(full.w[i]);
    m.orig.push_back(full.orig[i]);
  }

  const int n = static_cast<int>(m.pts.size());
  // Warm incumbents: hulls of the negative cloud and of its thinned and
  // weight-thresholded variants. Each evaluated set is itself a candidate
  // polygon, so a good match here lets the exact prunes below fire from the
  // first fan onward.
  {
    const auto offer_region = [&](const ConvexPolygon& region) {
      if (region.is_empty()) return;
      std::vector<Point> captured;
      for (int i = 0; i < n; ++i)
        if (region.contains(m.pts[(std::size_t)i])) captured.push_back(m.pts[(std::size_t)i]);
      if (captured.empty()) return;
      // Rescore against the hull of the captured points: the hull is the
      // actual candidate polygon, and rescanning it with the exact snapped
      // predicates keeps the incumbent value achievable, which the exactness
      // of the pruning below relies on. The region test itself may use
      // unsnapped vertices and is only a heuristic filter.
      const ConvexPolygon hull = convex_hull(captured);
      double raw = 0.0;
      std::vector<int> inc;
      for (int i = 0; i < n; ++i)
        if (hull.contains(m.pts[(std::size_t)i])) {
          raw += m.w[(std::size_t)i];
          inc.push_back(i);
        }
      if (inc.empty() || raw >= best.raw) return;
      dpdetail::Best cand;
      cand.raw = raw;
      cand.is_empty_set = false;
      cand.base = inc.front();
      cand.chain.assign(inc.begin() + 1, inc.end());
      best = std::move(cand);
    };
    offer_region(hull_neg);
    for (double delta : {0.01, 0.02, 0.04, 0.08, 0.16})
      offer_region(thin_linf(hull_neg, delta));
    for (double q : {-0.05, -0.1, -0.15}) {
      std::vector<Point> core;
      for (int i = 0; i < n; ++i)
        if (m.w[(std::size_t)i] < q) core.push_back(m.pts[(std::size_t)i]);
      if (core.size() >= 3) offer_region(convex_hull(core));
    }
  }

  std::vector<double> neg_after(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = n - 1; i >= 0; --i)
    neg_after[(std::size_t)i] =
        neg_after[(std::size_t)i + 1] + (m.w[(std::size_t)i] < 0.0 ? m.w[(std::size_t)i] : 0.0);

  // Fans in ascending order of the per-base lower bound (base weight plus
  // every negative after it). The bound ignores geometry, so it stays a true
  // lower bound; once it crosses the incumbent no later base can win.
  std::vector<int> bases;
  for (int b = 0; b < n; ++b)
    if (m.w[(std::size_t)b] < 0.0) bases.push_back(b);
  std::stable_sort(bases.begin(), bases.end(), [&](int a, int c) {
    return m.w[(std::size_t)a] + neg_after[(std::size_t)a + 1] <
           m.w[(std::size_t)c] + neg_after[(std::size_t)c + 1];
  });
  dpdetail::FanWs ws;
  for (int b : bases) {
    if (m.w[(std::size_t)b] + neg_after[(std::size_t)b + 1] >= best.raw) break;
    dpdetail::run_fan(m, b, ws, best);
  }

  if (best.raw >= 0.0) {
    best = dpdetail::Best{};
    best.raw = 0.0;
    best.is_empty_set = true;
  }
  OptimizerResult r = dpdetail::finalize(m, best, m.denom);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Exhaustive reference: enumerates all 2^n subsets, takes the convex hull of
// each, and scores the points inside that hull. Correct because the sample
// points inside hull(C) for C drawn from the sample form exactly the
// hull-closure of C, which covers every achievable included set.
inline OptimizerResult brute_force_oracle(const WeightedSample& sample, std::size_t max_n = 15) {
  const auto t0 = std::chrono::steady_clock::now();
  if (sample.points.size() > max_n)
    throw std::invalid_argument("brute_force_oracle: sample too large");
  dpdetail::Merged m = dpdetail::merge_sample(sample);
  const int n = static_cast<int>(m.pts.size());

  double best_raw = 0.0;
  bool best_empty = true;
  std::vector<int> best_included;
  ConvexPolygon best_poly;

  std::vector<Point> pts;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    pts.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1ULL << i)) pts.push_back(m.pts[(std::size_t)i]);
    const ConvexPolygon poly = convex_hull(pts);
    double raw = 0.0;
    std::vector<int> inc;
    for (int i = 0; i < n; ++i)
      if (poly.contains(m.pts[(std::size_t)i])) {
        raw += m.w[(std::size_t)i];
        inc.push_back(i);
      }
    const bool better =
        raw < best_raw ||
        (raw == best_raw && !best_empty &&
         (inc.size() < best_included.size() ||
          (inc.size() == best_included.size() && inc < best_included)));
    if (better) {
      best_raw = raw;
      best_empty = false;
      best_included = std::move(inc);
      best_poly = poly;
    }
  }

  OptimizerResult r;
  r.criterion = best_raw / m.denom;
  if (!best_empty) {
    r.polygon = best_poly;
    for (int id : best_included)
      for (std::size_t o : m.orig[(std::size_t)id]) r.included_indices.push_back(o);
    std::sort(r.included_indices.begin(), r.included_indices.end());
    int base_id = best_included.front();
    for (int id : best_included)
      if (lex_less(m.pts[(std::size_t)id], m.pts[(std::size_t)base_id])) base_id = id;
    r.base_vertex = static_cast<std::ptrdiff_t>(m.orig[(std::size_t)base_id].front());
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace bzone
