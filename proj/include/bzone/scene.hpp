#pragma once
// Synthetic ground truth: a convex baseline zone S0 inside [0,1]^2, a mean
// surface mu that equals tau0 on S0 and grows like C0 * rho^p off it (rho =
// l-infinity distance to S0), plus the two sampling designs (random-design
// dose-response, fixed-grid regression).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bzone/geometry.hpp"
#include "bzone/random.hpp"

namespace bzone {

struct Disc {
  Point center;
  double radius = 0.0;
};

struct Ellipse {  // axis-aligned
  Point center;
  double rx = 0.0;
  double ry = 0.0;
};

using Shape = std::variant<Disc, Ellipse, ConvexPolygon>;

// Exact l-infinity distance from q to a closed disc. Zero inside. Outside,
// the optimal square either touches the disc on the axis through the center
// (when the other coordinate gap is small enough) or at a balanced corner
// where both coordinate gaps equal t: (dx-t)^2 + (dy-t)^2 = R^2.
inline double dist_linf_to_disc(const Point& q, const Disc& d) {
  const double dx = std::abs(q.x - d.center.x);
  const double dy = std::abs(q.y - d.center.y);
  if (dx * dx + dy * dy <= d.radius * d.radius) return 0.0;
  const double hi = std::max(dx, dy), lo = std::min(dx, dy);
  if (lo <= hi - d.radius) return hi - d.radius;
  const double disc = 2.0 * d.radius * d.radius - (hi - lo) * (hi - lo);
  return 0.5 * ((hi + lo) - std::sqrt(disc));
}

// Regular polygon inscribed in the shape boundary. 512 segments keep the
// area defect of a disc below 1e-4 * R^2.
inline ConvexPolygon polygonize_shape(const Shape& shape, int segments = 512) {
  if (const auto* poly = std::get_if<ConvexPolygon>(&shape)) return *poly;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(segments));
  double cx, cy, rx, ry;
  if (const auto* d = std::get_if<Disc>(&shape)) {
    cx = d->center.x; cy = d->center.y; rx = ry = d->radius;
  } else {
    const auto& e = std::get<Ellipse>(shape);
    cx = e.center.x; cy = e.center.y; rx = e.rx; ry = e.ry;
  }
  for (int i = 0; i < segments; ++i) {
    const double a = 6.283185307179586 * (static_cast<double>(i) / segments);
    pts.push_back(Point{cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
  return convex_hull(pts);
}

// Design distribution F of the random design points. Uniform, or piecewise
// constant on a side x side grid of cells with given relative masses.
struct Design {
  enum class Kind { Uniform, DensityGrid } kind = Kind::Uniform;
  int side = 0;
  std::vector<double> cell_mass;  // normalized to sum 1, row-major
  std::vector<double> cell_cdf;   // prefix sums for sampling

  static Design uniform() { return Design{}; }

  static Design density_grid(int side, std::vector<double> mass) {
    if (side < 1 || mass.size() != static_cast<std::size_t>(side) * side)
      throw std::invalid_argument("density_grid: bad table size");
    double total = 0.0;
    for (double v : mass) {
      if (v < 0.0) throw std::invalid_argument("density_grid: negative mass");
      total += v;
    }
    if (total <= 0.0) throw std::invalid_argument("density_grid: zero mass");
    Design d;
    d.kind = Kind::DensityGrid;
    d.side = side;
    d.cell_mass = std::move(mass);
    d.cell_cdf.resize(d.cell_mass.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.cell_mass.size(); ++i) {
      d.cell_mass[i] /= total;
      acc += d.cell_mass[i];
      d.cell_cdf[i] = acc;
    }
    d.cell_cdf.back() = 1.0;
    return d;
  }

  bool is_uniform() const { return kind == Kind::Uniform; }

  // Density f(x) relative to Lebesgue measure on [0,1]^2.
  double density(const Point& x) const {
    if (kind == Kind::Uniform) return 1.0;
    const auto clampi = [&](double v) {
      int i = static_cast<int>(v * side);
      return std::min(std::max(i, 0), side - 1);
    };
    const std::size_t idx =
        static_cast<std::size_t>(clampi(x.x)) * side + clampi(x.y);
    return cell_mass[idx] * side * side;
  }

  Point sample(Rng& rng) const {
    if (kind == Kind::Uniform) {
      const double x = rng.uniform01();
      return Point{x, rng.uniform01()};
    }
    const double u = rng.uniform01();
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cell_cdf.begin(), cell_cdf.end(), u) - cell_cdf.begin());
    const int cx = static_cast<int>(idx) / side;
    const int cy = static_cast<int>(idx) % side;
    const double w = 1.0 / side;
    const double x = (cx + rng.uniform01()) * w;
    return Point{x, (cy + rng.uniform01()) * w};
  }
};

// Ground truth for simulation. The mean surface is
//   mu(x) = tau0 + C0 * min(rho, kappa0)^p + C0 * p * kappa0^(p-1) * (rho - kappa0)+
// with rho the l-infinity distance to S0: exactly C0 * rho^p within kappa0 of
// the zone, then the tangent-line continuation, which stays above tau0 +
// delta0 provided delta0 <= C0 * kappa0^p (validated).
struct GroundTruthScene {
  Shape s0;
  double tau0 = 0.0;
  double c0 = 1.0;      // growth constant C0
  double p = 1.0;       // regularity exponent
  double kappa0 = 0.2;  // radius of the exact power-growth collar
  double delta0 = 0.1;  // guaranteed separation beyond the collar
  double sigma0 = 1.0;  // error standard deviation
  double eps0 = 0.05;   // margin keeping S0 away from the frame
  Design design;
  NoiseLaw noise = NoiseLaw::Gaussian;

  ConvexPolygon s0_poly;  // cached polygonization, filled by finalize()

  void finalize(int segments = 512) {
    if (c0 <= 0 || p <= 0 || kappa0 <= 0 || delta0 <= 0 || sigma0 < 0 || eps0 <= 0)
      throw std::invalid_argument("scene: nonpositive parameter");
    if (delta0 > c0 * std::pow(kappa0, p) + 1e-12)
      throw std::invalid_argument("scene: delta0 exceeds C0*kappa0^p, separation unreachable");
    s0_poly = polygonize_shape(s0, segments);
    if (s0_poly.vertex_count() < 3 || s0_poly.area() <= 0.0)
      throw std::invalid_argument("scene: S0 has zero area");
    double lo_x = 1.0, lo_y = 1.0, hi_x = 0.0, hi_y = 0.0;
    for (const Point& v : s0_poly.vertices()) {
      lo_x = std::min(lo_x, v.x); hi_x = std::max(hi_x, v.x);
      lo_y = std::min(lo_y, v.y); hi_y = std::max(hi_y, v.y);
    }
    if (const auto* d = std::get_if<Disc>(&s0)) {
      lo_x = d->center.x - d->radius; hi_x = d->center.x + d->radius;
      lo_y = d->center.y - d->radius; hi_y = d->center.y + d->radius;
    } else if (const auto* e = std::get_if<Ellipse>(&s0)) {
      lo_x = e->center.x - e->rx; hi_x = e->center.x + e->rx;
      lo_y = e->center.y - e->ry; hi_y = e->center.y + e->ry;
    }
    if (lo_x < eps0 || lo_y < eps0 || hi_x > 1.0 - eps0 || hi_y > 1.0 - eps0)
      throw std::invalid_argument("scene: S0 leaves the eps0-inset frame");
  }
};

inline double dist_linf_to_s0(const GroundTruthScene& scene, const Point& x) {
  if (const auto* d = std::get_if<Disc>(&scene.s0)) return dist_linf_to_disc(x, *d);
  return dist_linf_point_polygon(x, scene.s0_poly);
}

inline double mu_eval(const GroundTruthScene& scene, const Point& x) {
  const double rho = dist_linf_to_s0(scene, x);
  if (rho <= 0.0) return scene.tau0;
  if (rho <= scene.kappa0) return scene.tau0 + scene.c0 * std::pow(rho, scene.p);
  return scene.tau0 + scene.c0 * std::pow(scene.kappa0, scene.p) +
         scene.c0 * scene.p * std::pow(scene.kappa0, scene.p - 1.0) * (rho - scene.kappa0);
}

// Dose-response data: n design points, m replicates each, only the replicate
// means are kept.
struct DoseResponseData {
  std::vector<Point> points;
  std::vector<double> replicate_means;
  int m = 1;
  double sigma0 = 0.0;  // simulator bookkeeping, not visible to the estimator
};

// Fixed-grid regression data: responses at x_kl = (k/m, l/m), k,l = 1..m,
// stored row-major with k varying slowest.
struct GridData {
  int m = 0;
  std::vector<double> responses;
  double sigma0 = 0.0;

  Point point(int k, int l) const {  // 0-based indices
    return Point{static_cast<double>(k + 1) / m, static_cast<double>(l + 1) / m};
  }
  double& at(int k, int l) { return responses[static_cast<std::size_t>(k) * m + l]; }
  double at(int k, int l) const { return responses[static_cast<std::size_t>(k) * m + l]; }
};

// Replicate means are drawn from the exact law of the mean when the noise is
// Gaussian (single N(0, sigma0^2/m) draw); `full_replicates` forces averaging
// m individual draws, the only exact option for the non-Gaussian laws.
inline DoseResponseData sample_dose_response(const GroundTruthScene& scene, int m, int n,
                                             std::uint64_t seed,
                                             bool full_replicates = false) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_dose_response: m, n >= 1");
  Rng rng(seed);
  DoseResponseData out;
  out.m = m;
  out.sigma0 = scene.sigma0;
  out.points.reserve(static_cast<std::size_t>(n));
  out.replicate_means.reserve(static_cast<std::size_t>(n));
  const double root_m = std::sqrt(static_cast<double>(m));
  for (int i = 0; i < n; ++i) {
    const Point x = scene.design.sample(rng);
    const double mu = mu_eval(scene, x);
    double ybar;
    if (scene.sigma0 == 0.0) {
      ybar = mu;
    } else if (full_replicates) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += rng.noise(scene.noise);
      ybar = mu + scene.sigma0 * acc / m;
    } else {
      ybar = mu + scene.sigma0 * rng.noise(scene.noise) / root_m;
    }
    out.points.push_back(x);
    out.replicate_means.push_back(ybar);
  }
  return out;
}

inline GridData sample_grid(const GroundTruthScene& scene, int m, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("sample_grid: m >= 2");
  Rng rng(seed);
  GridData out;
  out.m = m;
  out.sigma0 = scene.sigma0;
  out.responses.resize(static_cast<std::size_t>(m) * m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      const double mu = mu_eval(scene, out.point(k, l));
      out.at(k, l) = scene.sigma0 == 0.0 ? mu : mu + scene.sigma0 * rng.noise(scene.noise);
    }
  return out;
}

// The disc scene used throughout the simulation studies: r=0.25 centered
// disc, p-regular cone with C0=1.
inline GroundTruthScene disc_scene(double p = 1.0, double sigma0 = 0.5) {
  GroundTruthScene scene;
  scene.s0 = Disc{{0.5, 0.5}, 0.25};
  scene.tau0 = 0.0;
  scene.c0 = 1.0;
  scene.p = p;
  scene.kappa0 = 0.2;
  scene.delta0 = std::min(0.1, 0.5 * std::pow(scene.kappa0, p));
  scene.sigma0 = sigma0;
  scene.eps0 = 0.05;
  scene.finalize();
  return scene;
}

}  // namespace bzone
