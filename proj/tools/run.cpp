#include "run.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "sadet/attack.hpp"
#include "sadet/csv.hpp"
#include "sadet/detector.hpp"

namespace sadet::cli {

namespace {

using nlohmann::json;

json sensor_set_json(const SensorSet& set) {
  json out = json::array();
  for (int id : set.ids()) out.push_back(id);
  return out;
}

json sensor_sets_json(const std::vector<SensorSet>& sets) {
  json out = json::array();
  for (const auto& set : sets) out.push_back(sensor_set_json(set));
  return out;
}

struct Acquired {
  data::IoDataset data;
  double sample_period;
};

Acquired acquire_data(const RunConfig& config) {
  if (!config.data_path.empty())
    return {io::ingest_csv(config.data_path), config.three_inertia.sample_period};

  std::optional<model::LtiSystem> sys;
  double period = config.three_inertia.sample_period;
  if (config.inline_system) {
    sys.emplace(config.inline_system->A, config.inline_system->B, config.inline_system->C);
    period = 1.0;
  } else if (config.system_preset == "three_inertia") {
    sys.emplace(model::discretize_zoh(model::three_inertia(config.three_inertia)));
  } else {
    throw DataQualityError("unknown system preset '" + config.system_preset + "'");
  }

  const double omega =
      config.input_omega != 0.0 ? config.input_omega : 0.5 * period;
  const Eigen::MatrixXd inputs = model::sine_with_noise_input(
      config.length, config.input_amplitude, omega, config.noise_std, config.seed);

  std::optional<attack::ScenarioPreset> preset;
  if (!config.attack_preset.empty())
    preset = attack::scenario_preset(config.attack_preset, config.length, period);

  const model::Trajectory traj =
      model::simulate(*sys, Eigen::VectorXd::Zero(sys->n()), inputs,
                      preset ? &preset->model : nullptr);
  return {data::IoDataset::from_trajectory(traj), period};
}

void write_outputs_csv(const std::string& path, const data::IoDataset& data) {
  std::ofstream file(path);
  file << "k";
  for (int i = 1; i <= data.p(); ++i) file << ",y_" << i;
  file << "\n";
  char buf[64];
  for (int k = 0; k < data.length(); ++k) {
    file << k;
    for (int i = 0; i < data.p(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.outputs(i, k));
      file << ',' << buf;
    }
    file << "\n";
  }
}

void write_rank_series_csv(const std::string& path,
                           const std::vector<Eigen::Index>& ranks) {
  std::ofstream file(path);
  file << "k,rank\n";
  for (std::size_t k = 0; k < ranks.size(); ++k) file << k << ',' << ranks[k] << "\n";
}

void write_sigma_profiles_csv(const std::string& path,
                              const detect::IdentificationReport& report) {
  std::ofstream file(path);
  file << "k";
  for (const auto& [gamma, profile] : report.sigma_profiles)
    file << ",sigma_" << gamma.to_string();
  file << "\n";
  if (report.sigma_profiles.empty()) return;
  const Eigen::Index count = report.sigma_profiles.front().second.size();
  char buf[64];
  for (Eigen::Index k = 0; k < count; ++k) {
    file << k;
    for (const auto& [gamma, profile] : report.sigma_profiles) {
      std::snprintf(buf, sizeof(buf), "%.17g", profile(k));
      file << ',' << buf;
    }
    file << "\n";
  }
}

json tolerances_json(const detect::DetectorConfig& cfg, double residual_eps_used) {
  return json{
      {"rank_tol_mode",
       cfg.rank_tol.mode == linalg::RankTolerance::Mode::relative ? "relative" : "absolute"},
      {"rank_tol", cfg.rank_tol.value},
      {"residual_eps", cfg.residual_eps},
      {"residual_eps_used", residual_eps_used},
  };
}

json detection_json(const detect::DetectionReport& report) {
  json out;
  out["verdict"] = report.verdict == detect::Verdict::attack ? "Attack" : "NoAttack";
  if (!report.subset_ranks.empty()) {
    json subsets = json::array();
    for (const auto& [gamma, rank] : report.subset_ranks)
      subsets.push_back(json{{"gamma", sensor_set_json(gamma)}, {"rank", rank}});
    out["ranks"] = json{{"subsets", subsets}};
  }
  if (!report.window_ranks.empty()) {
    out["ranks"] = json{{"windows", report.window_ranks}};
    out["t_star"] = report.t_star;
    out["mu"] = report.mu;
  }
  if (report.degenerate) out["degenerate"] = true;
  if (!report.caveat.empty()) out["caveat"] = report.caveat;
  return out;
}

json identification_json(const detect::IdentificationReport& report) {
  json out;
  out["gamma_star"] = sensor_set_json(report.gamma_star);
  out["candidates"] = sensor_sets_json(report.candidates);
  json residuals = json::array();
  for (const auto& [gamma, value] : report.max_residuals)
    residuals.push_back(json{{"gamma", sensor_set_json(gamma)}, {"max_residual", value}});
  if (!residuals.empty()) out["max_residuals"] = residuals;
  if (!report.vacuous_filters.empty())
    out["vacuous_filters"] = sensor_sets_json(report.vacuous_filters);
  if (report.t_star > 0) out["t_star"] = report.t_star;
  return out;
}

}  // namespace

RunResult run(const RunConfig& config) {
  namespace fs = std::filesystem;
  config.detector.validate();
  fs::create_directories(config.out_dir);
  const fs::path out_dir(config.out_dir);
  const fs::path plot_dir = out_dir / "plotdata";
  if (config.emit_plotdata) fs::create_directories(plot_dir);

  const Acquired acquired = acquire_data(config);
  const data::IoDataset& data = acquired.data;

  json report;
  report["mode"] = mode_to_string(config.mode);
  report["seed"] = config.seed;
  report["config_digest"] = config_digest(config);
  report["data"] = json{{"m", data.m()}, {"p", data.p()}, {"length", data.length()}};
  double residual_eps_used = config.detector.residual_eps;

  int exit_status = 0;
  switch (config.mode) {
    case Mode::simulate: {
      io::export_csv((out_dir / "data.csv").string(), data);
      report["data_file"] = (out_dir / "data.csv").string();
      break;
    }
    case Mode::detect_sparse: {
      const auto detection = detect::detect_sparse(data, config.detector);
      report.update(detection_json(detection));
      exit_status = detection.verdict == detect::Verdict::attack ? 1 : 0;
      break;
    }
    case Mode::identify_sparse:
    case Mode::full_pipeline: {
      if (config.mode == Mode::full_pipeline)
        io::export_csv((out_dir / "data.csv").string(), data);
      const auto detection = detect::detect_sparse(data, config.detector);
      report.update(detection_json(detection));
      exit_status = detection.verdict == detect::Verdict::attack ? 1 : 0;
      if (detection.verdict == detect::Verdict::attack) {
        const auto id = detect::identify_sparse(detection, config.detector);
        report.update(identification_json(id));
      }
      break;
    }
    case Mode::detect_clean: {
      const auto detection = detect::detect_partial_clean(data, config.detector);
      report.update(detection_json(detection));
      exit_status = detection.verdict == detect::Verdict::attack ? 1 : 0;
      if (config.emit_plotdata)
        write_rank_series_csv((plot_dir / "rank_series.csv").string(),
                              detection.window_ranks);
      break;
    }
    case Mode::identify_clean: {
      const auto id = detect::identify_partial_clean(data, config.detector);
      report.update(identification_json(id));
      residual_eps_used = id.residual_eps_used;
      report["verdict"] = id.gamma_star.is_empty() ? "NoAttack" : "Attack";
      exit_status = id.gamma_star.is_empty() ? 0 : 1;
      if (config.emit_plotdata)
        write_sigma_profiles_csv((plot_dir / "sigma_profiles.csv").string(), id);
      break;
    }
  }

  if (config.emit_plotdata)
    write_outputs_csv((plot_dir / "outputs.csv").string(), data);

  report["tolerances"] = tolerances_json(config.detector, residual_eps_used);
  report["exit_status"] = exit_status;

  const fs::path report_path = out_dir / "report.json";
  std::ofstream file(report_path);
  file << report.dump(2) << "\n";
  if (!file) throw DataQualityError(report_path.string() + ": write failed");
  return RunResult{exit_status, report_path.string()};
}

}  // namespace sadet::cli
