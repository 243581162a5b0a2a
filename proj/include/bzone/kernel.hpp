#pragma once
// Product-kernel smoothing on the fixed m x m grid, the interior region that
// keeps the kernel window inside the unit square, and the weighted sample
// for the regression setting.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bzone/scene.hpp"
#include "bzone/stump.hpp"

namespace bzone {

struct KernelSpec {
  enum class Name { Epanechnikov, Triangular };
  Name name = Name::Epanechnikov;
  double L0 = 1.0;               // one-sided support radius of K0
  double lipschitz_bound = 1.5;  // sup |K0'|

  double k0(double u) const {
    const double a = std::abs(u);
    if (a >= L0) return 0.0;
    if (name == Name::Epanechnikov) return 0.75 * (1.0 - u * u);
    return 1.0 - a;
  }
  // Closed form of the squared-kernel integral, used in the variance
  // constant Sigma^2 = sigma0^2 * (int K0^2)^2 for the product kernel.
  double k0_sq_integral() const {
    return name == Name::Epanechnikov ? 3.0 / 5.0 : 2.0 / 3.0;
  }

  static KernelSpec epanechnikov() { return KernelSpec{}; }
  static KernelSpec triangular() { return KernelSpec{Name::Triangular, 1.0, 1.0}; }
};

inline KernelSpec parse_kernel(const std::string& s) {
  if (s == "epanechnikov") return KernelSpec::epanechnikov();
  if (s == "triangular") return KernelSpec::triangular();
  throw std::invalid_argument("unknown kernel: " + s);
}

inline const char* kernel_name(const KernelSpec& k) {
  return k.name == KernelSpec::Name::Epanechnikov ? "epanechnikov" : "triangular";
}

// h_n = h0 * n^(-beta); beta = 1/(2(p+1)) is the rate-optimal preset.
struct BandwidthPolicy {
  double h0 = 0.5;
  double beta = 0.25;

  void validate() const {
    if (!(h0 > 0.0)) throw std::invalid_argument("bandwidth: h0 must be positive");
    if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("bandwidth: beta in (0, 1/2)");
  }
  double h(std::size_t n) const {
    return h0 * std::pow(static_cast<double>(n), -beta);
  }
  static BandwidthPolicy rate_optimal(double p, double h0 = 0.5) {
    return BandwidthPolicy{h0, 1.0 / (2.0 * (p + 1.0))};
  }
};

// muhat(x) = (1/(n h^2)) sum Y_kl K((x - x_kl)/h) at every grid point, with
// the plain Riemann normalization (no self-normalizing denominator). The
// product kernel makes the sum separable, so it runs as a column pass then a
// row pass, each truncated to the support window.
inline std::vector<double> kernel_estimate(const GridData& data, const KernelSpec& kernel,
                                           double h, unsigned workers = 1) {
  if (!(h > 0.0)) throw std::invalid_argument("kernel_estimate: h must be positive");
  const std::size_t m = data.m;
  const double mh = static_cast<double>(m) * h;
  const int w = static_cast<int>(std::ceil(kernel.L0 * mh));
  std::vector<double> taps(static_cast<std::size_t>(2 * w + 1));
  for (int d = -w; d <= w; ++d)
    taps[static_cast<std::size_t>(d + w)] = kernel.k0(static_cast<double>(d) / mh);

  std::vector<double> tmp(m * m, 0.0), out(m * m, 0.0);
  const auto convolve_rows = [&](const std::vector<double>& src, std::vector<double>& dst,
                                 std::size_t row_begin, std::size_t row_end) {
    const int mi = static_cast<int>(m);
    for (std::size_t k = row_begin; k < row_end; ++k)
      for (int l = 0; l < mi; ++l) {
        double acc = 0.0;
        const int lo = std::max(0, l - w), hi = std::min(mi - 1, l + w);
        for (int t = lo; t <= hi; ++t)
          acc += src[k * m + static_cast<std::size_t>(t)] *
                 taps[static_cast<std::size_t>(l - t + w)];
        dst[k * m + static_cast<std::size_t>(l)] = acc;
      }
  };
  const auto transpose = [&](std::vector<double>& a) {
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = k + 1; l < m; ++l) std::swap(a[k * m + l], a[l * m + k]);
  };

  const auto run_pass = [&](const std::vector<double>& src, std::vector<double>& dst) {
    const unsigned nw = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m)));
    if (nw == 1) {
      convolve_rows(src, dst, 0, m);
      return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + nw - 1) / nw;
    for (unsigned t = 0; t < nw; ++t) {
      const std::size_t b = t * chunk, e = std::min(m, b + chunk);
      if (b >= e) break;
      pool.emplace_back(convolve_rows, std::cref(src), std::ref(dst), b, e);
    }
    for (auto& th : pool) th.join();
  };

  run_pass(data.responses, tmp);  // smooth along l (columns within a row)
  transpose(tmp);
  run_pass(tmp, out);             // smooth along k
  transpose(out);
  const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m) * h * h);
  for (double& v : out) v *= scale;
  return out;
}

// Grid-point mask of the interior region [L0*h, 1 - L0*h]^2.
inline std::vector<std::uint8_t> interior_mask(std::size_t m, double h, double L0) {
  if (!(L0 * h < 0.5)) throw std::invalid_argument("interior_mask: L0*h >= 1/2, interior empty");
  std::vector<std::uint8_t> axis(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double c = static_cast<double>(k + 1) / static_cast<double>(m);
    axis[k] = (c >= L0 * h && c <= 1.0 - L0 * h) ? 1 : 0;
  }
  std::vector<std::uint8_t> mask(m * m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) mask[k * m + l] = axis[k] & axis[l];
  return mask;
}

// Weighted sample for the regression criterion: interior grid points with
// weights Phi(sqrt(n h^2) (muhat - tau)) - gamma. The criterion denominator
// stays n = m^2, not the interior count.
inline WeightedSample regression_weights(const GridData& data, const KernelSpec& kernel,
                                         const BandwidthPolicy& policy, const StumpConfig& cfg,
                                         unsigned workers = 1) {
  cfg.validate();
  policy.validate();
  const std::size_t m = data.m;
  const std::size_t n = m * m;
  const double h = policy.h(n);
  const std::vector<double> mu = kernel_estimate(data, kernel, h, workers);
  const std::vector<std::uint8_t> mask = interior_mask(m, h, kernel.L0);
  const double scale = std::sqrt(static_cast<double>(n) * h * h);

  WeightedSample s;
  s.gamma = cfg.gamma;
  s.denom = static_cast<double>(n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      if (!mask[k * m + l]) continue;
      // snapped so the sample matches the optimizer's exact coordinates
      s.points.push_back(snap_point(data.point(static_cast<int>(k), static_cast<int>(l))));
      s.weights.push_back(normal_cdf(scale * (mu[k * m + l] - cfg.tau_hat)) - cfg.gamma);
    }
  return s;
}

}  // namespace bzone
