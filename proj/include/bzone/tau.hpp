#pragma once
// Baseline level estimation: least-squares initial estimate of tau0 from the
// p-value link, refinement by averaging responses over the thinned estimated
// zone, and the alternating loop between zone estimation and refinement.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bzone/convex_dp.hpp"
#include "bzone/geometry.hpp"
#include "bzone/kernel.hpp"
#include "bzone/scene.hpp"
#include "bzone/stump.hpp"

namespace bzone {

struct TauFit {
  double tau_init = 0.0;
  double tau_refined = 0.0;
  int iterations = 0;
  double delta_thin = 0.05;
  bool converged = false;
};

namespace taudetail {

// Coarse 512-point scan to find the basin, then golden-section down to an
// interval of width 1e-8. The objective can be flat far from the data, so
// the scan guards against landing in a plateau.
template <class F>
double scan_golden(F&& f, double lo, double hi) {
  if (!(hi > lo)) return lo;
  constexpr int kScan = 512;
  int best_i = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double t = lo + (hi - lo) * i / (kScan - 1.0);
    const double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / (kScan - 1.0);
  double b = lo + (hi - lo) * std::min(kScan - 1, best_i + 1) / (kScan - 1.0);
  constexpr double invphi = 0.61803398874989485;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-8) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double link_objective(const std::vector<double>& responses, double scale, double tau) {
  double acc = 0.0;
  for (double y : responses) {
    const double g = normal_cdf(scale * (y - tau)) - 0.5;
    acc += g * g;
  }
  return acc / static_cast<double>(responses.size());
}

inline double minimize_link(const std::vector<double>& responses, double scale) {
  double lo = responses.front(), hi = responses.front();
  for (double y : responses) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  return scan_golden([&](double t) { return link_objective(responses, scale, t); }, lo, hi);
}

}  // namespace taudetail

// argmin over tau of the mean of (Phi(sqrt(m)(Ybar_i - tau)) - 1/2)^2.
inline double tau_init_dose(const DoseResponseData& data) {
  if (data.replicate_means.empty()) throw std::invalid_argument("tau_init_dose: empty data");
  return taudetail::minimize_link(data.replicate_means,
                                  std::sqrt(static_cast<double>(data.m)));
}

// Regression analogue with the smoothed values over the interior region.
inline double tau_init_regression(const GridData& data, const KernelSpec& kernel,
                                  const BandwidthPolicy& policy) {
  policy.validate();
  const std::size_t m = static_cast<std::size_t>(data.m);
  const std::size_t n = m * m;
  const double h = policy.h(n);
  const std::vector<double> mu = kernel_estimate(data, kernel, h);
  const std::vector<std::uint8_t> mask = interior_mask(m, h, kernel.L0);
  std::vector<double> vals;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mask[i]) vals.push_back(mu[i]);
  if (vals.empty()) throw std::invalid_argument("tau_init_regression: empty interior");
  return taudetail::minimize_link(vals, std::sqrt(static_cast<double>(n)) * h);
}

// Mean response over the data points inside the delta-thinned estimate.
inline double tau_refine(const OptimizerResult& estimate, const DoseResponseData& data,
                         double delta_thin) {
  const ConvexPolygon thin = thin_linf(estimate.polygon, delta_thin);
  double acc = 0.0;
  std::size_t cnt = 0;
  if (!thin.vertices().empty())
    for (std::size_t i = 0; i < data.points.size(); ++i)
      if (thin.contains(data.points[i])) {
        acc += data.replicate_means[i];
        ++cnt;
      }
  if (cnt == 0) throw std::runtime_error("tau_refine: thinned set captures no data points");
  return acc / static_cast<double>(cnt);
}

inline double tau_refine(const OptimizerResult& estimate, const GridData& data,
                         double delta_thin) {
  const ConvexPolygon thin = thin_linf(estimate.polygon, delta_thin);
  double acc = 0.0;
  std::size_t cnt = 0;
  if (!thin.vertices().empty())
    for (int k = 0; k < data.m; ++k)
      for (int l = 0; l < data.m; ++l)
        if (thin.contains(data.point(k, l))) {
          acc += data.at(k, l);
          ++cnt;
        }
  if (cnt == 0) throw std::runtime_error("tau_refine: thinned set captures no data points");
  return acc / static_cast<double>(cnt);
}

namespace taudetail {

template <class MakeSample, class Refine>
TauFit iterate_loop(double tau0_init, MakeSample&& make_sample, Refine&& refine, int max_iters,
                    double delta_thin) {
  if (max_iters < 1) throw std::invalid_argument("tau_iterate: max_iters must be >= 1");
  TauFit fit;
  fit.tau_init = tau0_init;
  fit.delta_thin = delta_thin;
  double tau = tau0_init;
  for (int it = 1; it <= max_iters; ++it) {
    fit.iterations = it;
    const OptimizerResult est = estimate_set(make_sample(tau));
    double next = tau;
    try {
      next = refine(est);
    } catch (const std::runtime_error&) {
      // thinned estimate lost all data points: keep the current value
    }
    const bool done = std::abs(next - tau) <= 1e-6;
    tau = next;
    if (done) {
      fit.converged = true;
      break;
    }
  }
  fit.tau_refined = tau;
  return fit;
}

}  // namespace taudetail

// Alternates zone estimation at the current tau with refinement from the
// thinned zone, until the update is below 1e-6 or the iteration cap.
inline TauFit tau_iterate(const DoseResponseData& data, const StumpConfig& cfg,
                          int max_iters = 5, double delta_thin = 0.05) {
  cfg.validate();
  const double t0 = tau_init_dose(data);
  return taudetail::iterate_loop(
      t0,
      [&](double tau) {
        StumpConfig c = cfg;
        c.tau_hat = tau;
        return dose_response_weights(data, c);
      },
      [&](const OptimizerResult& est) { return tau_refine(est, data, delta_thin); }, max_iters,
      delta_thin);
}

inline TauFit tau_iterate(const GridData& data, const KernelSpec& kernel,
                          const BandwidthPolicy& policy, const StumpConfig& cfg,
                          int max_iters = 5, double delta_thin = 0.05) {
  cfg.validate();
  const double t0 = tau_init_regression(data, kernel, policy);
  return taudetail::iterate_loop(
      t0,
      [&](double tau) {
        StumpConfig c = cfg;
        c.tau_hat = tau;
        return regression_weights(data, kernel, policy, c);
      },
      [&](const OptimizerResult& est) { return tau_refine(est, data, delta_thin); }, max_iters,
      delta_thin);
}

}  // namespace bzone
