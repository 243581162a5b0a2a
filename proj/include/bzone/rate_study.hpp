#pragma once
// Replicated simulate -> estimate -> distance pipelines over a ladder of
// budgets, with median/IQR summaries and a least-squares slope of log
// median-distance against log budget. Replications fan out across workers by
// split seeds, so results do not depend on scheduling or worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bzone/convex_dp.hpp"
#include "bzone/kernel.hpp"
#include "bzone/metrics.hpp"
#include "bzone/scene.hpp"
#include "bzone/tau.hpp"

namespace bzone {

enum class Setting { DoseResponse, Regression };
enum class TauMode { Known, Init, Iterative };

inline Setting parse_setting(const std::string& s) {
  if (s == "dose" || s == "dose-response" || s == "dose_response") return Setting::DoseResponse;
  if (s == "regression" || s == "grid") return Setting::Regression;
  throw std::invalid_argument("unknown setting: " + s);
}

inline const char* setting_name(Setting s) {
  return s == Setting::DoseResponse ? "dose-response" : "regression";
}

inline TauMode parse_tau_mode(const std::string& s) {
  if (s == "known") return TauMode::Known;
  if (s == "init") return TauMode::Init;
  if (s == "iterative") return TauMode::Iterative;
  throw std::invalid_argument("unknown tau mode: " + s);
}

inline const char* tau_mode_name(TauMode m) {
  switch (m) {
    case TauMode::Known: return "known";
    case TauMode::Init: return "init";
    case TauMode::Iterative: return "iterative";
  }
  return "unknown";
}

// One budget level: dose-response uses n design points with m replicates;
// regression uses the m x m grid (n = m^2 responses).
struct RateBudget {
  int m = 0;
  int n = 0;
};

struct RateStudySpec {
  Setting setting = Setting::DoseResponse;
  double p = 1.0;
  std::vector<RateBudget> budgets;
  int replications = 50;
  std::uint64_t seed = 1;
  TauMode tau_mode = TauMode::Known;
  GroundTruthScene scene;
  double gamma = 0.75;
  KernelSpec kernel = KernelSpec::epanechnikov();
  double h0 = 0.5;  // regression bandwidth preset h = h0 * n^{-1/(2(p+1))}
  int workers = 1;

  void validate() const {
    if (budgets.size() < 3) throw std::invalid_argument("rate study: need >= 3 budget levels");
    if (replications < 20)
      throw std::invalid_argument("rate study: need >= 20 replications for slope fits");
    for (const RateBudget& b : budgets)
      if (b.m < 1 || b.n < 1) throw std::invalid_argument("rate study: bad budget");
    if (workers < 1) throw std::invalid_argument("rate study: workers >= 1");
    if (scene.s0_poly.is_empty())
      throw std::invalid_argument("rate study: scene not finalized");
  }
};

// Dose preset: m grows as m0 * n^{4p/3}, the replication schedule that
// balances the two error terms.
inline std::vector<RateBudget> dose_budgets(const std::vector<int>& ns, double p,
                                            double m0 = 1.0) {
  std::vector<RateBudget> out;
  for (int n : ns) {
    const int m = std::max(1, static_cast<int>(std::lround(m0 * std::pow(n, 4.0 * p / 3.0))));
    out.push_back({m, n});
  }
  return out;
}

inline std::vector<RateBudget> regression_budgets(const std::vector<int>& ms) {
  std::vector<RateBudget> out;
  for (int m : ms) out.push_back({m, m * m});
  return out;
}

struct RateRow {
  RateBudget budget;
  double x = 0.0;  // abscissa of the slope fit: n (dose) or m^2 (regression)
  double median_d = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct RateStudyResult {
  std::vector<RateRow> rows;
  std::vector<std::vector<double>> errors;    // per budget, sorted ascending
  std::vector<std::vector<double>> tau_devs;  // scaled |tau_hat - tau0|, estimated-tau modes
  double slope = 0.0;
  double slope_lo = 0.0;  // bootstrap 95% CI
  double slope_hi = 0.0;
};

namespace ratedetail {

inline double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

struct RunOutcome {
  double d = 0.0;
  double tau_dev = 0.0;
};

inline RunOutcome run_one(const RateStudySpec& spec, const RateBudget& budget,
                          std::uint64_t seed) {
  StumpConfig cfg;
  cfg.gamma = spec.gamma;
  OptimizerResult est;
  double tau_dev = 0.0;
  if (spec.setting == Setting::DoseResponse) {
    const DoseResponseData data = sample_dose_response(spec.scene, budget.m, budget.n, seed);
    double tau = spec.scene.tau0;
    if (spec.tau_mode == TauMode::Init) {
      tau = tau_init_dose(data);
    } else if (spec.tau_mode == TauMode::Iterative) {
      tau = tau_iterate(data, cfg).tau_refined;
    }
    cfg.tau_hat = tau;
    est = estimate_set(dose_response_weights(data, cfg));
    tau_dev = std::sqrt(static_cast<double>(budget.m) * budget.n) * std::abs(tau - spec.scene.tau0);
  } else {
    const GridData data = sample_grid(spec.scene, budget.m, seed);
    const BandwidthPolicy policy{spec.h0, 1.0 / (2.0 * (spec.p + 1.0))};
    double tau = spec.scene.tau0;
    if (spec.tau_mode == TauMode::Init) {
      tau = tau_init_regression(data, spec.kernel, policy);
    } else if (spec.tau_mode == TauMode::Iterative) {
      tau = tau_iterate(data, spec.kernel, policy, cfg).tau_refined;
    }
    cfg.tau_hat = tau;
    est = estimate_set(regression_weights(data, spec.kernel, policy, cfg));
    const double n_total = static_cast<double>(budget.m) * budget.m;
    tau_dev = std::sqrt(n_total) * policy.h(n_total) * std::abs(tau - spec.scene.tau0);
  }
  return {metric_d(est.polygon, spec.scene), tau_dev};
}

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("slope fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit: degenerate abscissa");
  return sxy / sxx;
}

inline double log_median_slope(const std::vector<double>& xs,
                               const std::vector<double>& medians) {
  std::vector<double> lx(xs.size()), ly(medians.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(std::max(medians[i], 1e-12));  // noiseless runs can hit ~0
  }
  return ls_slope(lx, ly);
}

}  // namespace ratedetail

inline RateStudyResult run_rate_study(const RateStudySpec& spec) {
  spec.validate();
  const std::size_t levels = spec.budgets.size();
  const std::size_t reps = static_cast<std::size_t>(spec.replications);
  RateStudyResult result;
  result.errors.assign(levels, std::vector<double>(reps, 0.0));
  result.tau_devs.assign(levels, std::vector<double>(reps, 0.0));

  const std::size_t tasks = levels * reps;
  const auto worker = [&](std::size_t begin) {
    for (std::size_t t = begin; t < tasks; t += static_cast<std::size_t>(spec.workers)) {
      const std::size_t level = t / reps;
      const std::size_t rep = t % reps;
      const ratedetail::RunOutcome out =
          ratedetail::run_one(spec, spec.budgets[level], split_seed(spec.seed, t));
      result.errors[level][rep] = out.d;
      result.tau_devs[level][rep] = out.tau_dev;
    }
  };
  if (spec.workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < spec.workers; ++w) pool.emplace_back(worker, static_cast<std::size_t>(w));
    for (auto& th : pool) th.join();
  }

  std::vector<double> xs(levels), medians(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    std::sort(result.errors[i].begin(), result.errors[i].end());
    std::sort(result.tau_devs[i].begin(), result.tau_devs[i].end());
    RateRow row;
    row.budget = spec.budgets[i];
    row.x = spec.setting == Setting::DoseResponse
                ? static_cast<double>(spec.budgets[i].n)
                : static_cast<double>(spec.budgets[i].m) * spec.budgets[i].m;
    row.median_d = ratedetail::quantile_sorted(result.errors[i], 0.5);
    row.q25 = ratedetail::quantile_sorted(result.errors[i], 0.25);
    row.q75 = ratedetail::quantile_sorted(result.errors[i], 0.75);
    result.rows.push_back(row);
    xs[i] = row.x;
    medians[i] = row.median_d;
  }
  result.slope = ratedetail::log_median_slope(xs, medians);

  // Bootstrap the slope by resampling replications within each budget.
  constexpr int kBoot = 200;
  std::vector<double> boot(kBoot);
  for (int b = 0; b < kBoot; ++b) {
    Rng rng(split_seed(spec.seed, 0x42000000ULL + static_cast<std::uint64_t>(b)));
    std::vector<double> med(levels);
    std::vector<double> draw(reps);
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t r = 0; r < reps; ++r)
        draw[r] = result.errors[i][static_cast<std::size_t>(rng.uniform01() * reps) % reps];
      std::sort(draw.begin(), draw.end());
      med[i] = ratedetail::quantile_sorted(draw, 0.5);
    }
    boot[b] = ratedetail::log_median_slope(xs, med);
  }
  std::sort(boot.begin(), boot.end());
  result.slope_lo = boot[static_cast<std::size_t>(0.025 * (kBoot - 1))];
  result.slope_hi = boot[static_cast<std::size_t>(0.975 * (kBoot - 1))];
  return result;
}

// Adjacent increases of the median ladder; the preset scenes are expected to
// stay at <= 1 for 4 budgets (monotone at the 3-of-4 level).
inline int monotone_increases(const RateStudyResult& result) {
  int bad = 0;
  for (std::size_t i = 1; i < result.rows.size(); ++i)
    if (result.rows[i].median_d > result.rows[i - 1].median_d) ++bad;
  return bad;
}

inline std::string rate_study_to_csv(const RateStudySpec& spec, const RateStudyResult& result) {
  std::string out = "# rate-study setting=" + std::string(setting_name(spec.setting)) +
                    " tau_mode=" + tau_mode_name(spec.tau_mode) + " p=" + std::to_string(spec.p) +
                    " replications=" + std::to_string(spec.replications) +
                    " slope=" + std::to_string(result.slope) +
                    " ci=" + std::to_string(result.slope_lo) + ":" +
                    std::to_string(result.slope_hi) + "\n";
  out += "m,n,x,median_d,q25,q75\n";
  char buf[160];
  for (const RateRow& r : result.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.budget.m, r.budget.n,
                  r.x, r.median_d, r.q25, r.q75);
    out += buf;
  }
  return out;
}

}  // namespace bzone
