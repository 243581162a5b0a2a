#pragma once
// Command layer behind the bzone binary. Each cmd_* function implements one
// subcommand against parsed options, writes its outputs under out_dir, sends
// diagnostics to the supplied streams, and returns the process exit code, so
// every command is testable in-process.
//
// Exit codes: 0 ok, 1 usage, 2 validation failure (oracle mismatch), 3 data
// or config error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bzone/convex_dp.hpp"
#include "bzone/io.hpp"
#include "bzone/kernel.hpp"
#include "bzone/metrics.hpp"
#include "bzone/rate_study.hpp"
#include "bzone/scene.hpp"
#include "bzone/stump.hpp"
#include "bzone/svg.hpp"
#include "bzone/tau.hpp"

namespace bzone {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitData = 3;

namespace clidetail {

inline std::string out_path(const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(p);
  return (p / name).string();
}

enum class DataKind { Dose, Grid };

// Data files identify themselves by their header tag.
inline DataKind sniff_data(const std::string& text) {
  const std::size_t nl = text.find('\n');
  const std::string first = text.substr(0, nl == std::string::npos ? text.size() : nl);
  if (first.find("dose-response") != std::string::npos) return DataKind::Dose;
  if (first.find("# grid") != std::string::npos) return DataKind::Grid;
  throw std::runtime_error("unrecognized data header: '" + first + "'");
}

// Effective estimation settings shared by estimate, tau-fit and render. All
// values have recorded defaults so a report echoes the full configuration.
struct EstimateConfig {
  double gamma = 0.75;
  std::string tau_mode = "init";  // known | init | iterative
  bool has_tau = false;           // explicit tau value given (tau_mode known)
  double tau = 0.0;
  std::string kernel = "epanechnikov";
  double h0 = 0.5;
  double p = 1.0;
  double delta_thin = 0.05;
  int max_iters = 5;

  static EstimateConfig from_kv(const KvFile& kv) {
    EstimateConfig c;
    c.gamma = kv.number_or("gamma", c.gamma);
    c.has_tau = kv.has("tau");
    if (c.has_tau) c.tau = kv.number("tau");
    c.tau_mode = kv.get_or("tau_mode", c.has_tau ? "known" : "init");
    c.kernel = kv.get_or("kernel", c.kernel);
    c.h0 = kv.number_or("h0", c.h0);
    c.p = kv.number_or("p", c.p);
    c.delta_thin = kv.number_or("delta_thin", c.delta_thin);
    c.max_iters = static_cast<int>(kv.number_or("max_iters", c.max_iters));
    if (c.tau_mode != "known" && c.tau_mode != "init" && c.tau_mode != "iterative")
      throw std::runtime_error("config: unknown tau_mode '" + c.tau_mode + "'");
    parse_kernel(c.kernel);  // validates the name
    return c;
  }

  BandwidthPolicy policy() const { return BandwidthPolicy{h0, 1.0 / (2.0 * (p + 1.0))}; }
};

}  // namespace clidetail

struct SimulateOptions {
  std::string scene_path;
  std::string setting = "dose-response";
  int m = 10;
  int n = 100;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string out_name;  // derived from the sizes when empty
};

// Draws one data set from the scene and writes it as CSV; deterministic per
// seed, so re-runs are byte-identical.
inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  Setting setting;
  try {
    setting = parse_setting(opt.setting);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const GroundTruthScene scene = scene_from_config(read_text_file(opt.scene_path));
    std::string name = opt.out_name;
    std::string csv;
    if (setting == Setting::DoseResponse) {
      const DoseResponseData data = sample_dose_response(scene, opt.m, opt.n, opt.seed);
      csv = dose_to_csv(data);
      if (name.empty())
        name = "dose-m" + std::to_string(opt.m) + "-n" + std::to_string(opt.n) + "-seed" +
               std::to_string(opt.seed) + ".csv";
    } else {
      const GridData data = sample_grid(scene, opt.m, opt.seed);
      csv = grid_to_csv(data);
      if (name.empty())
        name = "grid-m" + std::to_string(opt.m) + "-seed" + std::to_string(opt.seed) + ".csv";
    }
    const std::string path = clidetail::out_path(opt.out_dir, name);
    write_text_file(path, csv);
    out << path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

struct EstimateOptions {
  std::string data_path;
  std::string config_path;  // optional
  std::string scene_path;   // optional: enables metrics and known-tau default
  std::string out_dir = ".";
  std::string report_name = "report.json";
  bool svg = false;
  std::string svg_name = "estimate.svg";
  unsigned workers = 1;
};

// Full pipeline: weights from the configured tau handling, the convex
// optimizer, metrics against the scene when one is supplied, and the report.
inline int cmd_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string data_text = read_text_file(opt.data_path);
    const clidetail::DataKind kind = clidetail::sniff_data(data_text);
    clidetail::EstimateConfig cfg_in = clidetail::EstimateConfig::from_kv(
        opt.config_path.empty() ? KvFile{} : parse_kv(read_text_file(opt.config_path)));

    GroundTruthScene scene;
    bool have_scene = false;
    if (!opt.scene_path.empty()) {
      scene = scene_from_config(read_text_file(opt.scene_path));
      have_scene = true;
    }

    StumpConfig stump;
    stump.gamma = cfg_in.gamma;

    EstimateReport rep;
    rep.data_digest = digest_hex(data_text);
    if (have_scene) rep.scene_digest = digest_hex(scene_to_config(scene));

    double tau_effective = 0.0;
    WeightedSample sample;
    const KernelSpec kernel = parse_kernel(cfg_in.kernel);
    const BandwidthPolicy policy = cfg_in.policy();

    if (kind == clidetail::DataKind::Dose) {
      const DoseResponseData data = dose_from_csv(data_text);
      if (cfg_in.tau_mode == "known") {
        if (cfg_in.has_tau)
          tau_effective = cfg_in.tau;
        else if (have_scene)
          tau_effective = scene.tau0;
        else
          throw std::runtime_error("config: tau_mode known needs a tau value or a scene");
      } else if (cfg_in.tau_mode == "init") {
        tau_effective = tau_init_dose(data);
        rep.has_tau = true;
        rep.tau.tau_init = rep.tau.tau_refined = tau_effective;
        rep.tau.delta_thin = cfg_in.delta_thin;
      } else {
        rep.tau = tau_iterate(data, stump, cfg_in.max_iters, cfg_in.delta_thin);
        rep.has_tau = true;
        tau_effective = rep.tau.tau_refined;
      }
      stump.tau_hat = tau_effective;
      sample = dose_response_weights(data, stump);
    } else {
      const GridData data = grid_from_csv(data_text);
      if (cfg_in.tau_mode == "known") {
        if (cfg_in.has_tau)
          tau_effective = cfg_in.tau;
        else if (have_scene)
          tau_effective = scene.tau0;
        else
          throw std::runtime_error("config: tau_mode known needs a tau value or a scene");
      } else if (cfg_in.tau_mode == "init") {
        tau_effective = tau_init_regression(data, kernel, policy);
        rep.has_tau = true;
        rep.tau.tau_init = rep.tau.tau_refined = tau_effective;
        rep.tau.delta_thin = cfg_in.delta_thin;
      } else {
        rep.tau = tau_iterate(data, kernel, policy, stump, cfg_in.max_iters, cfg_in.delta_thin);
        rep.has_tau = true;
        tau_effective = rep.tau.tau_refined;
      }
      stump.tau_hat = tau_effective;
      sample = regression_weights(data, kernel, policy, stump, opt.workers);
    }

    const OptimizerResult est = estimate_set(sample);

    // The effective configuration is echoed in full, including the resolved
    // tau, so downstream commands (render) and re-runs see one source of
    // truth.
    rep.config = {{"setting", kind == clidetail::DataKind::Dose ? "dose-response" : "regression"},
                  {"gamma", fmt_g17(cfg_in.gamma)},
                  {"tau_mode", cfg_in.tau_mode},
                  {"tau_effective", fmt_g17(tau_effective)},
                  {"kernel", cfg_in.kernel},
                  {"h0", fmt_g17(cfg_in.h0)},
                  {"p", fmt_g17(cfg_in.p)},
                  {"delta_thin", fmt_g17(cfg_in.delta_thin)},
                  {"max_iters", cfg_in.max_iters}};
    rep.optimizer = est;
    if (have_scene) {
      rep.has_metrics = true;
      rep.d = metric_d(est.polygon, scene);
      rep.d_f = metric_dF(est.polygon, scene);
      rep.hausdorff = metric_hausdorff(est.polygon, scene);
    }
    rep.wall_clock_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const std::string report_path = clidetail::out_path(opt.out_dir, opt.report_name);
    write_text_file(report_path, report_to_json(rep).dump(2) + "\n");
    if (opt.svg) {
      const ConvexPolygon truth = have_scene ? scene.s0_poly : ConvexPolygon{};
      write_text_file(clidetail::out_path(opt.out_dir, opt.svg_name),
                      render_svg(sample, est.polygon, truth));
    }
    out << report_path << "\n";
    out << "criterion=" << fmt_g17(est.criterion) << " vertices=" << est.polygon.vertex_count();
    if (have_scene) out << " d=" << fmt_g17(rep.d);
    out << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

struct OracleCheckOptions {
  int count = 200;
  int n_min = 4;
  int n_max = 12;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double recompute_tol = 1e-12;
  bool quiet = false;  // table suppressed, summary only
};

// Random instances against the exhaustive oracle: the optimizer's criterion
// must match the brute-force minimum, and its reported inclusion bookkeeping
// must match a plain point-in-polygon rescan.
inline int cmd_oracle_check(const OracleCheckOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.n_min < 3 || opt.n_max > 15 || opt.n_min > opt.n_max) {
    err << "error: oracle-check needs 3 <= n_min <= n_max <= 15\n";
    return kExitUsage;
  }
  if (opt.count < 1) {
    err << "error: oracle-check needs count >= 1\n";
    return kExitUsage;
  }
  int failures = 0;
  for (int i = 0; i < opt.count; ++i) {
    Rng rng(split_seed(opt.seed, static_cast<std::uint64_t>(i)));
    const int span = opt.n_max - opt.n_min + 1;
    const int n = opt.n_min + static_cast<int>(rng.uniform01() * span) % span;
    WeightedSample s;
    s.denom = static_cast<double>(n);
    for (int k = 0; k < n; ++k) {
      s.points.push_back(snap_point({rng.uniform01(), rng.uniform01()}));
      s.weights.push_back(rng.uniform(-1.0, 1.0));
    }
    const OptimizerResult dp = estimate_set(s);
    const OptimizerResult oracle = brute_force_oracle(s);
    const double diff = std::abs(dp.criterion - oracle.criterion);

    // Inclusion bookkeeping, both through the reported index set and through
    // an independent point-in-polygon rescan of the winning polygon.
    double via_indices = 0.0;
    for (std::size_t idx : dp.included_indices) via_indices += s.weights[idx];
    via_indices /= s.denom;
    double via_polygon = 0.0;
    if (!dp.polygon.is_empty())
      for (std::size_t k = 0; k < s.points.size(); ++k)
        if (dp.polygon.contains(s.points[k])) via_polygon += s.weights[k];
    via_polygon /= s.denom;
    const double recompute =
        std::max(std::abs(via_indices - dp.criterion), std::abs(via_polygon - dp.criterion));

    const bool ok = diff <= opt.tol && recompute <= opt.recompute_tol;
    if (!ok) ++failures;
    if (!opt.quiet || !ok) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "%4d n=%2d dp=%+.12f oracle=%+.12f diff=%.3e recompute=%.3e %s", i + 1, n,
                    dp.criterion, oracle.criterion, diff, recompute, ok ? "ok" : "FAIL");
      out << line << "\n";
    }
  }
  out << "passed " << (opt.count - failures) << "/" << opt.count << "\n";
  return failures == 0 ? kExitOk : kExitValidation;
}

struct RateStudyOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string out_name = "rate-study.csv";
  std::uint64_t seed = 0;  // nonzero overrides the config seed
  int workers = 0;         // nonzero overrides the config workers
};

// Budget ladder from a key-value config: budgets, replications, tau handling
// and the scene reference, with the CSV summary and fitted slope as outputs.
inline int cmd_rate_study(const RateStudyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const KvFile kv = parse_kv(read_text_file(opt.config_path));
    RateStudySpec spec;
    spec.setting = parse_setting(kv.get("setting"));
    spec.p = kv.number_or("p", 1.0);
    spec.replications = static_cast<int>(kv.number_or("replications", 50));
    spec.seed = static_cast<std::uint64_t>(kv.number_or("seed", 1));
    spec.tau_mode = parse_tau_mode(kv.get_or("tau_mode", "known"));
    spec.gamma = kv.number_or("gamma", 0.75);
    spec.kernel = parse_kernel(kv.get_or("kernel", "epanechnikov"));
    spec.h0 = kv.number_or("h0", 0.5);
    spec.workers = static_cast<int>(kv.number_or("workers", 1));
    spec.scene = scene_from_config(read_text_file(kv.get("scene")));
    if (spec.setting == Setting::DoseResponse) {
      std::vector<int> ns;
      for (const std::string& tok : iodetail::split(kv.get("ns"), ','))
        ns.push_back(static_cast<int>(parse_int(iodetail::trim(tok), "ns")));
      spec.budgets = dose_budgets(ns, spec.p, kv.number_or("m0", 1.0));
    } else {
      std::vector<int> ms;
      for (const std::string& tok : iodetail::split(kv.get("ms"), ','))
        ms.push_back(static_cast<int>(parse_int(iodetail::trim(tok), "ms")));
      spec.budgets = regression_budgets(ms);
    }
    if (opt.seed != 0) spec.seed = opt.seed;
    if (opt.workers != 0) spec.workers = opt.workers;
    spec.validate();

    const RateStudyResult result = run_rate_study(spec);
    const std::string path = clidetail::out_path(opt.out_dir, opt.out_name);
    write_text_file(path, rate_study_to_csv(spec, result));
    out << path << "\n";
    for (const RateRow& row : result.rows)
      out << "m=" << row.budget.m << " n=" << row.budget.n << " median_d=" << fmt_g17(row.median_d)
          << " iqr=[" << fmt_g17(row.q25) << "," << fmt_g17(row.q75) << "]\n";
    out << "slope=" << fmt_g17(result.slope) << " ci95=[" << fmt_g17(result.slope_lo) << ","
        << fmt_g17(result.slope_hi) << "]"
        << " monotone_increases=" << monotone_increases(result) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

struct TauFitOptions {
  std::string data_path;
  std::string config_path;  // optional
  std::string out_dir = ".";
  std::string out_name = "tau.json";
};

// Runs the alternating tau loop on its own and writes the fit summary.
inline int cmd_tau_fit(const TauFitOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const std::string data_text = read_text_file(opt.data_path);
    const clidetail::DataKind kind = clidetail::sniff_data(data_text);
    const clidetail::EstimateConfig cfg = clidetail::EstimateConfig::from_kv(
        opt.config_path.empty() ? KvFile{} : parse_kv(read_text_file(opt.config_path)));
    StumpConfig stump;
    stump.gamma = cfg.gamma;
    TauFit fit;
    if (kind == clidetail::DataKind::Dose) {
      fit = tau_iterate(dose_from_csv(data_text), stump, cfg.max_iters, cfg.delta_thin);
    } else {
      fit = tau_iterate(grid_from_csv(data_text), parse_kernel(cfg.kernel), cfg.policy(), stump,
                        cfg.max_iters, cfg.delta_thin);
    }
    const std::string path = clidetail::out_path(opt.out_dir, opt.out_name);
    write_text_file(path, tau_to_json(fit).dump(2) + "\n");
    out << path << "\n";
    out << "tau_init=" << fmt_g17(fit.tau_init) << " tau_refined=" << fmt_g17(fit.tau_refined)
        << " iterations=" << fit.iterations << " converged=" << (fit.converged ? "yes" : "no")
        << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

struct RenderOptions {
  std::string data_path;
  std::string report_path;
  std::string scene_path;  // optional truth outline
  std::string out_dir = ".";
  std::string out_name = "render.svg";
  unsigned workers = 1;
};

// Rebuilds the weighted sample from the report's recorded configuration and
// renders it with the fitted polygon and the optional truth outline.
inline int cmd_render(const RenderOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const std::string data_text = read_text_file(opt.data_path);
    const clidetail::DataKind kind = clidetail::sniff_data(data_text);
    const nlohmann::json report = nlohmann::json::parse(read_text_file(opt.report_path));
    const nlohmann::json& cfg = report.at("config");

    StumpConfig stump;
    stump.gamma = parse_double(cfg.at("gamma").get<std::string>(), "config gamma");
    stump.tau_hat = parse_double(cfg.at("tau_effective").get<std::string>(), "config tau");
    WeightedSample sample;
    if (kind == clidetail::DataKind::Dose) {
      sample = dose_response_weights(dose_from_csv(data_text), stump);
    } else {
      const double p = parse_double(cfg.at("p").get<std::string>(), "config p");
      const double h0 = parse_double(cfg.at("h0").get<std::string>(), "config h0");
      const BandwidthPolicy policy{h0, 1.0 / (2.0 * (p + 1.0))};
      sample = regression_weights(grid_from_csv(data_text),
                                  parse_kernel(cfg.at("kernel").get<std::string>()), policy, stump,
                                  opt.workers);
    }
    const ConvexPolygon estimate = polygon_from_json(report.at("optimizer").at("vertices"));
    ConvexPolygon truth;
    if (!opt.scene_path.empty())
      truth = scene_from_config(read_text_file(opt.scene_path)).s0_poly;
    const std::string path = clidetail::out_path(opt.out_dir, opt.out_name);
    write_text_file(path, render_svg(sample, estimate, truth));
    out << path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace bzone
