// bzone: baseline zone estimation toolkit.
//
// Subcommands: simulate, estimate, oracle-check, rate-study, tau-fit, render.
// Global flags --seed, --config, --out-dir and --workers apply to whichever
// subcommand uses them. Exit codes: 0 ok, 1 usage, 2 validation failure,
// 3 data error.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bzone/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"baseline zone estimation toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string config;
  std::string out_dir = ".";
  unsigned workers = 1;
  app.add_option("--seed", seed, "random seed (commands that draw data)");
  app.add_option("--config", config, "key-value config file");
  app.add_option("--out-dir", out_dir, "directory for output files");
  app.add_option("--workers", workers, "worker threads where supported");

  auto* sim = app.add_subcommand("simulate", "draw a data set from a scene");
  std::string sim_scene, sim_setting = "dose-response", sim_out;
  int sim_m = 10, sim_n = 100;
  sim->add_option("--scene", sim_scene, "scene file")->required();
  sim->add_option("--setting", sim_setting, "dose-response or regression");
  sim->add_option("--m", sim_m, "replications per point (dose) or grid side (regression)");
  sim->add_option("--n", sim_n, "design points (dose-response only)");
  sim->add_option("--out", sim_out, "output file name");

  auto* est = app.add_subcommand("estimate", "fit the baseline zone to a data file");
  std::string est_data, est_scene, est_report = "report.json", est_svg_name = "estimate.svg";
  bool est_svg = false;
  est->add_option("--data", est_data, "data CSV from simulate")->required();
  est->add_option("--scene", est_scene, "scene file (enables metrics)");
  est->add_option("--report", est_report, "report file name");
  est->add_flag("--svg", est_svg, "also render an SVG");
  est->add_option("--svg-name", est_svg_name, "SVG file name");

  auto* orc = app.add_subcommand("oracle-check", "optimizer vs exhaustive oracle");
  int orc_count = 200, orc_n_min = 4, orc_n_max = 12;
  bool orc_quiet = false;
  orc->add_option("--count", orc_count, "number of random instances");
  orc->add_option("--n-min", orc_n_min, "smallest instance size");
  orc->add_option("--n-max", orc_n_max, "largest instance size");
  orc->add_flag("--quiet", orc_quiet, "print failures and the summary only");

  auto* rate = app.add_subcommand("rate-study", "replicated error-vs-budget study");
  std::string rate_out = "rate-study.csv";
  rate->add_option("--out", rate_out, "CSV file name");

  auto* tau = app.add_subcommand("tau-fit", "alternating baseline level fit");
  std::string tau_data, tau_out = "tau.json";
  tau->add_option("--data", tau_data, "data CSV from simulate")->required();
  tau->add_option("--out", tau_out, "output file name");

  auto* ren = app.add_subcommand("render", "SVG from a data file and a report");
  std::string ren_data, ren_report, ren_scene, ren_out = "render.svg";
  ren->add_option("--data", ren_data, "data CSV from simulate")->required();
  ren->add_option("--report", ren_report, "report JSON from estimate")->required();
  ren->add_option("--scene", ren_scene, "scene file for the truth outline");
  ren->add_option("--out", ren_out, "output file name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bzone::kExitUsage;
  }

  if (sim->parsed()) {
    bzone::SimulateOptions opt;
    opt.scene_path = sim_scene;
    opt.setting = sim_setting;
    opt.m = sim_m;
    opt.n = sim_n;
    opt.seed = seed == 0 ? 1 : seed;
    opt.out_dir = out_dir;
    opt.out_name = sim_out;
    return bzone::cmd_simulate(opt, std::cout, std::cerr);
  }
  if (est->parsed()) {
    bzone::EstimateOptions opt;
    opt.data_path = est_data;
    opt.config_path = config;
    opt.scene_path = est_scene;
    opt.out_dir = out_dir;
    opt.report_name = est_report;
    opt.svg = est_svg;
    opt.svg_name = est_svg_name;
    opt.workers = workers;
    return bzone::cmd_estimate(opt, std::cout, std::cerr);
  }
  if (orc->parsed()) {
    bzone::OracleCheckOptions opt;
    opt.count = orc_count;
    opt.n_min = orc_n_min;
    opt.n_max = orc_n_max;
    opt.seed = seed == 0 ? 1 : seed;
    opt.quiet = orc_quiet;
    return bzone::cmd_oracle_check(opt, std::cout, std::cerr);
  }
  if (rate->parsed()) {
    bzone::RateStudyOptions opt;
    opt.config_path = config;
    opt.out_dir = out_dir;
    opt.out_name = rate_out;
    opt.seed = seed;
    opt.workers = static_cast<int>(workers) == 1 ? 0 : static_cast<int>(workers);
    if (opt.config_path.empty()) {
      std::cerr << "error: rate-study needs --config\n";
      return bzone::kExitUsage;
    }
    return bzone::cmd_rate_study(opt, std::cout, std::cerr);
  }
  if (tau->parsed()) {
    bzone::TauFitOptions opt;
    opt.data_path = tau_data;
    opt.config_path = config;
    opt.out_dir = out_dir;
    opt.out_name = tau_out;
    return bzone::cmd_tau_fit(opt, std::cout, std::cerr);
  }
  if (ren->parsed()) {
    bzone::RenderOptions opt;
    opt.data_path = ren_data;
    opt.report_path = ren_report;
    opt.scene_path = ren_scene;
    opt.out_dir = out_dir;
    opt.out_name = ren_out;
    opt.workers = workers;
    return bzone::cmd_render(opt, std::cout, std::cerr);
  }
  return bzone::kExitUsage;
}
