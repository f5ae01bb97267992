#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "sadet/detector.hpp"
#include "sadet/system.hpp"

namespace sadet::cli {

enum class Mode {
  simulate,
  detect_sparse,
  identify_sparse,
  detect_clean,
  identify_clean,
  full_pipeline,
};

Mode mode_from_string(const std::string& name);
std::string mode_to_string(Mode mode);

/// Discrete-time system given directly in the config file.
struct InlineSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
};

/// Everything one run needs, assembled from the config file plus flag
/// overrides.
struct RunConfig {
  Mode mode{Mode::full_pipeline};

  // system: a named preset or inline matrices
  std::string system_preset{"three_inertia"};
  std::optional<InlineSystem> inline_system;
  model::ThreeInertiaParams three_inertia;

  // input generation (when no data file is given)
  int length{500};
  double input_amplitude{0.01};
  double input_omega{0.0};  // 0 selects 0.5 * sample_period
  double noise_std{1e-4};
  std::uint64_t seed{7};

  std::string attack_preset;  // empty = attack-free run

  detect::DetectorConfig detector{10, 2, 6};

  std::string data_path;  // CSV to ingest instead of simulating
  std::string out_dir{"out"};
  bool emit_plotdata{true};

  /// Canonical one-line-per-field dump; hashed into the report digest.
  std::string canonical_dump() const;
};

/// Parse the INI-style config file (sections in brackets, key = value,
/// '#' comments). Unknown keys are rejected.
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the canonical dump, as fixed-width hex.
std::string config_digest(const RunConfig& config);

}  // namespace sadet::cli
