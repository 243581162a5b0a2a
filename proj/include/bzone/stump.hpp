#pragma once
// Stump weights and the empirical / population criteria. The estimator fits
// a two-level stump to non-normalized p-values, which reduces to minimizing
//   M_n(S) = (1/n) sum_i (Phi(T_i) - gamma) 1{X_i in S}
// over closed convex S, with T the scaled deviation of the response from the
// imputed baseline level tau_hat.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bzone/geometry.hpp"
#include "bzone/random.hpp"
#include "bzone/scene.hpp"

namespace bzone {

// Standard normal CDF via erfc; absolute error below 1e-15.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

struct StumpConfig {
  double gamma = 0.75;
  double tau_hat = 0.0;

  void validate() const {
    if (!(gamma > 0.5 && gamma < 1.0))
      throw std::invalid_argument("StumpConfig: gamma must be in (1/2, 1)");
  }
};

// Points with stump weights w_i = Phi(T_i) - gamma in [-gamma, 1-gamma].
// `denom` is the n of the criterion's 1/n factor; for regression samples it
// is the full grid size m^2 even though only interior points carry weights.
struct WeightedSample {
  std::vector<Point> points;
  std::vector<double> weights;
  double gamma = 0.75;
  double denom = 0.0;
};

inline std::vector<double> dose_response_pvalues(const DoseResponseData& data,
                                                 const StumpConfig& cfg) {
  cfg.validate();
  if (data.points.size() != data.replicate_means.size())
    throw std::invalid_argument("dose_response_pvalues: length mismatch");
  const double root_m = std::sqrt(static_cast<double>(data.m));
  std::vector<double> p(data.replicate_means.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = 1.0 - normal_cdf(root_m * (data.replicate_means[i] - cfg.tau_hat));
  return p;
}

inline WeightedSample dose_response_weights(const DoseResponseData& data,
                                            const StumpConfig& cfg) {
  cfg.validate();
  if (data.points.size() != data.replicate_means.size())
    throw std::invalid_argument("dose_response_weights: length mismatch");
  WeightedSample s;
  s.gamma = cfg.gamma;
  s.denom = static_cast<double>(data.points.size());
  s.points.resize(data.points.size());
  // Snapped here so the sample carries the exact coordinates the optimizer
  // and its returned polygon refer to.
  for (std::size_t i = 0; i < s.points.size(); ++i) s.points[i] = snap_point(data.points[i]);
  s.weights.resize(data.points.size());
  const double root_m = std::sqrt(static_cast<double>(data.m));
  for (std::size_t i = 0; i < s.weights.size(); ++i)
    s.weights[i] =
        normal_cdf(root_m * (data.replicate_means[i] - cfg.tau_hat)) - cfg.gamma;
  return s;
}

// (1/n) sum of weights of sample points in the closed polygon.
inline double criterion_value(const WeightedSample& sample, const ConvexPolygon& poly) {
  if (poly.is_empty() || sample.points.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i)
    if (poly.contains(sample.points[i])) acc += sample.weights[i];
  return acc / sample.denom;
}

// Population criterion M(S) = (1/2 - gamma) F(S0 ∩ S) + (1 - gamma) F(S0^c ∩ S).
// Exact polygon algebra for the uniform design (S0 polygonized); fixed-seed
// Monte Carlo otherwise.
inline double population_criterion(const GroundTruthScene& scene, const ConvexPolygon& poly,
                                   double gamma, std::uint64_t mc_seed = 2026,
                                   int mc_points = 200000) {
  if (poly.is_empty()) return 0.0;
  const double a = 0.5 - gamma;
  const double b = 1.0 - gamma;
  if (scene.design.is_uniform()) {
    const double inter = intersection_area(scene.s0_poly, poly);
    return a * inter + b * (poly.area() - inter);
  }
  Rng rng(mc_seed);
  double acc = 0.0;
  for (int i = 0; i < mc_points; ++i) {
    const Point x = scene.design.sample(rng);
    if (!poly.contains(x)) continue;
    acc += scene.s0_poly.contains(x) ? a : b;
  }
  return acc / mc_points;
}

}  // namespace bzone
