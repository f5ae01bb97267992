#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "config.hpp"
#include "run.hpp"
#include "sadet/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sadet: data-driven sensor-attack detection and identification"};

  std::string config_path;
  std::string mode;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int q = 0, l = -1, n_bound = -1;
  double rank_tol = -1.0, residual_eps = -1.0;
  bool parallel = false;

  app.add_option("--config", config_path, "Config file (INI-style sections)");
  app.add_option("--mode", mode,
                 "simulate | detect-sparse | identify-sparse | detect-clean | "
                 "identify-clean | full-pipeline");
  app.add_option("--out", out_dir, "Output directory for report.json and plot data");
  app.add_option("--seed", seed, "Simulation noise seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--q", q, "Hankel window depth");
  app.add_option("--l", l, "Maximum number of attacked sensors");
  app.add_option("--n-bound", n_bound, "Upper bound on the state dimension");
  app.add_option("--rank-tol", rank_tol, "Relative rank tolerance");
  app.add_option("--residual-eps", residual_eps,
                 "Residual zero threshold (0 = derive from the data)");
  app.add_flag("--parallel", parallel, "Fan rank and residual sweeps out across threads");

  CLI11_PARSE(app, argc, argv);

  try {
    sadet::cli::RunConfig config;
    if (!config_path.empty()) config = sadet::cli::load_config(config_path);
    if (!mode.empty()) config.mode = sadet::cli::mode_from_string(mode);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed_set) config.seed = seed;
    if (q > 0) config.detector.q = q;
    if (l >= 0) config.detector.l = l;
    if (n_bound >= 0) config.detector.n_bound = n_bound;
    if (rank_tol >= 0.0)
      config.detector.rank_tol = sadet::linalg::RankTolerance::relative(rank_tol);
    if (residual_eps >= 0.0) config.detector.residual_eps = residual_eps;
    if (parallel) config.detector.parallel = true;

    const auto result = sadet::cli::run(config);
    std::cout << "report: " << result.report_path << "\n";
    return result.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
