#pragma once
// Distances between an estimated zone and the ground-truth zone: Lebesgue
// measure of the symmetric difference, its design-weighted analogue, and the
// l-infinity Hausdorff distance. Curved zones are compared through their
// cached polygonization; polygonization_defect reports the area lost there.

#include <cmath>
#include <cstdint>
#include <limits>
#include <variant>

#include "bzone/geometry.hpp"
#include "bzone/random.hpp"
#include "bzone/scene.hpp"

namespace bzone {

// lambda(est symdiff S0), exact up to the polygonization of curved shapes.
inline double metric_d(const ConvexPolygon& est, const GroundTruthScene& scene) {
  return symmetric_difference_area(est, scene.s0_poly);
}

// Area gap between the analytic shape and its cached inscribed polygon.
// Zero for polygonal scenes; bounds the bias of metric_d for curved ones.
inline double polygonization_defect(const GroundTruthScene& scene) {
  const double pi = 3.14159265358979323846;
  double analytic = scene.s0_poly.area();
  if (const auto* d = std::get_if<Disc>(&scene.s0))
    analytic = pi * d->radius * d->radius;
  else if (const auto* e = std::get_if<Ellipse>(&scene.s0))
    analytic = pi * e->rx * e->ry;
  return analytic - scene.s0_poly.area();
}

struct DesignDistance {
  double value = 0.0;
  double se = 0.0;  // zero when computed exactly
  bool exact = true;
};

// F(est symdiff S0) for the design distribution F. Uniform designs reduce to
// metric_d and are computed exactly; otherwise a fixed-seed Monte Carlo draw
// from F estimates the mass with a binomial standard error.
inline DesignDistance metric_dF(const ConvexPolygon& est, const GroundTruthScene& scene,
                                std::size_t mc_points = 1000000, std::uint64_t seed = 2026) {
  if (scene.design.is_uniform()) return {metric_d(est, scene), 0.0, true};
  if (mc_points == 0) throw std::invalid_argument("metric_dF: zero Monte Carlo budget");
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < mc_points; ++i) {
    const Point x = scene.design.sample(rng);
    if (est.contains(x) != scene.s0_poly.contains(x)) ++hits;
  }
  const double n = static_cast<double>(mc_points);
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), false};
}

struct HausdorffDistance {
  double value = std::numeric_limits<double>::infinity();
  bool empty_estimate = true;  // the default +inf only arises for an empty estimate
};

// l-infinity Hausdorff distance to the polygonized S0. An empty estimate has
// no meaningful distance; it is flagged and reported as +infinity.
inline HausdorffDistance metric_hausdorff(const ConvexPolygon& est,
                                          const GroundTruthScene& scene) {
  if (est.vertex_count() == 0)
    return {std::numeric_limits<double>::infinity(), true};
  return {hausdorff_linf(est, scene.s0_poly), false};
}

}  // namespace bzone
