#include "stap/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "stap/config.hpp"
#include "stap/experiment.hpp"
#include "stap/matrix_io.hpp"
#include "stap/metrics.hpp"
#include "stap/scene.hpp"

namespace stap {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> trials;
  std::optional<int> threads;
};

int do_run(const RunOptions& opt, std::ostream& out) {
  ExperimentConfig cfg = load_experiment(opt.config);
  if (opt.seed) cfg.base_seed = *opt.seed;
  if (opt.out) cfg.output_dir = *opt.out;
  if (opt.trials) cfg.num_trials = *opt.trials;
  if (opt.threads) cfg.threads = *opt.threads;
  cfg.validate();

  const RunResult result = run_experiment(cfg);
  emit_csv(result, cfg.output_dir);
  write_summary(result, cfg.output_dir / "summary.json");

  out << "trials " << result.num_trials << ", snapshots " << result.snapshot_count << ", "
      << fmt("%.2f", result.wall_seconds) << " s\n";
  out << "optimum SINR " << fmt("%.4f", result.optimum_sinr_db) << " dB, matched filter "
      << fmt("%.4f", result.matched_filter_sinr_db) << " dB\n";
  for (const auto& a : result.algorithms) {
    out << "  " << a.label << ": final mean SINR " << fmt("%.4f", a.final_mean_sinr_db) << " dB ("
        << fmt("%+.4f", a.final_mean_sinr_db - result.optimum_sinr_db) << " dB vs optimum)\n";
  }
  out << "wrote " << (cfg.output_dir / "sinr.csv").string() << ", sinr_normalized.csv, pd.csv, summary.json\n";
  return kExitOk;
}

int do_complexity(int m, int d, int b, std::ostream& out) {
  out << "multiplications per snapshot, M=" << m << " D=" << d << " B=" << b << '\n';
  for (const auto& rep : complexity_table(m, d, b)) {
    char line[96];
    std::snprintf(line, sizeof line, "  %-14s %lld", rep.algorithm.c_str(), rep.multiplications);
    out << line;
    if (rep.quoted_value != 0 && rep.quoted_value != rep.multiplications) {
      out << "  (note: closed form gives " << rep.multiplications << "; the frequently quoted worked-example value "
          << rep.quoted_value << " differs by " << (rep.multiplications - rep.quoted_value) << ")";
    }
    out << '\n';
  }
  return kExitOk;
}

int do_scene(const std::string& config, const std::string& dir, std::ostream& out) {
  const RadarScenario sc = config.empty() ? RadarScenario{} : load_scenario(config);
  const CovarianceSet cov = assemble_covariance(sc);
  const SteeringVector s = space_time_steering(sc, sc.target_azimuth, sc.target_normalized_doppler);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  save_matrix(base / "clutter.bin", cov.clutter);
  save_matrix(base / "jammer.bin", cov.jammer);
  save_matrix(base / "noise.bin", cov.noise);
  save_matrix(base / "total.bin", cov.total);
  save_matrix(base / "coloring.bin", cov.coloring);
  save_matrix(base / "steering.bin", s.entries);

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov.clutter, Eigen::EigenvaluesOnly);
  const auto significant = (eig.eigenvalues().array() > sc.noise_power).count();
  out << "M = " << cov.dimension() << ", clutter ridge slope " << fmt("%.6g", sc.clutter_ridge_slope())
      << ", clutter eigenvalues above the noise floor: " << significant << '\n';
  out << "optimum SINR " << fmt("%.6f", optimum_sinr(cov.total, s, sc.target_power())) << " dB\n";
  out << "wrote clutter.bin jammer.bin noise.bin total.bin coloring.bin steering.bin to " << dir << '\n';
  return kExitOk;
}

int do_pd(double pfa, std::vector<double> rhos, double rho_max, double rho_step, std::ostream& out) {
  const double beta = pfa_to_beta(pfa);
  if (rhos.empty()) {
    if (!(rho_step > 0.0) || rho_max < 0.0) throw std::invalid_argument("invalid rho grid");
    const int n = static_cast<int>(std::floor(rho_max / rho_step + 1e-9));
    for (int k = 0; k <= n; ++k) rhos.push_back(k * rho_step);
  }
  out << "pfa " << fmt("%.10g", pfa) << ", beta " << fmt("%.10g", beta) << '\n';
  for (double rho : rhos) {
    out << "rho " << fmt("%.6g", rho) << "  sinr_db " << fmt("%.6g", linear_to_db(rho * rho)) << "  P_D "
        << fmt("%.10g", prob_detection(rho, beta)) << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced-rank STAP simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment from a config file");
  run->add_option("--config", run_opt.config, "Experiment config file")->required();
  run->add_option("--seed", run_opt.seed, "Base seed (overrides config)");
  run->add_option("--out", run_opt.out, "Output directory (overrides config)");
  run->add_option("--trials", run_opt.trials, "Number of trials (overrides config)");
  run->add_option("--threads", run_opt.threads, "Worker threads, 0 = all cores (overrides config)");

  int m = 64, d = 4, b = 16;
  auto* cx = app.add_subcommand("complexity", "Print per-snapshot multiplication counts");
  cx->add_option("--M", m, "Full dimension")->capture_default_str();
  cx->add_option("--D", d, "Reduced rank")->capture_default_str();
  cx->add_option("--B", b, "Number of basis sets")->capture_default_str();

  std::string scene_config, scene_out = "scene";
  auto* scene = app.add_subcommand("scene", "Export covariance matrices of a scenario");
  scene->add_option("--config", scene_config, "Scenario config file (default: built-in airborne scenario)");
  scene->add_option("--out", scene_out, "Output directory")->capture_default_str();

  double pfa = 1e-10, rho_max = 10.0, rho_step = 0.5;
  std::vector<double> rhos;
  auto* pd = app.add_subcommand("pd", "Evaluate detection probability for given rho values or a grid");
  pd->add_option("--pfa", pfa, "False-alarm probability")->capture_default_str();
  pd->add_option("--rho", rhos, "rho values (sqrt of output SINR); repeatable");
  pd->add_option("--rho-max", rho_max, "Grid upper bound when --rho is absent")->capture_default_str();
  pd->add_option("--rho-step", rho_step, "Grid step when --rho is absent")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitConfigError;
  }

  try {
    if (*run) return do_run(run_opt, out);
    if (*cx) return do_complexity(m, d, b, out);
    if (*scene) return do_scene(scene_config, scene_out, out);
    if (*pd) return do_pd(pfa, rhos, rho_max, rho_step, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace stap
