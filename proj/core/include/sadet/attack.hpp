#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sadet/system.hpp"
#include "sadet/types.hpp"

namespace sadet::attack {

/// One attack waveform, evaluated per compromised sensor i at time k:
///
///   a_i(k) = (state_gain + ramp_gain * k) * C_i x(k)
///          + frozen_gain * C_i x(frozen_index)
///          + sine_amplitude * sin(sine_omega * k + sine_phase)
///
/// frozen_index < 0 disables the frozen-state term. The frozen state is the
/// true state at that past sample, captured from the simulated trajectory.
struct Generator {
  double state_gain{0.0};
  double ramp_gain{0.0};
  double frozen_gain{0.0};
  int frozen_index{-1};
  double sine_amplitude{0.0};
  double sine_omega{0.0};
  double sine_phase{0.0};
};

/// A generator active on the closed sample interval [first, last]. When
/// `sensors` is set it must be a subset of the model support; otherwise the
/// window applies to the whole support.
struct ScheduleWindow {
  int first{0};
  int last{0};
  Generator generator;
  std::optional<SensorSet> sensors;
};

/// Sparse sensor attack with a fixed support over the whole horizon.
struct AttackModel {
  SensorSet support;
  std::vector<ScheduleWindow> schedule;

  /// Checks interval bounds, non-overlap, and per-window sensor subsets.
  void validate(int horizon) const;
};

/// Evaluate the attack vector at sample k. `states` is the n x N state
/// trajectory; the column at k (and at any frozen index) must exist.
/// The result is zero outside the support and outside scheduled windows.
Eigen::VectorXd eval_attack(const AttackModel& model, const model::LtiSystem& sys,
                            const Eigen::MatrixXd& states, int k);

/// Ground-truth record of one attack-free interval [start, start+length-1].
struct CleanIntervalTruth {
  int start{0};
  int length{0};
};

enum class IntervalClass { clean, transition, attack };

/// Classification of the depth-q window starting at k against one clean
/// interval, in the vector sense.
IntervalClass classify_interval(const CleanIntervalTruth& truth, int k, int depth);

/// Matrix-sense classification for a width-T block of windows.
IntervalClass classify_interval(const CleanIntervalTruth& truth, int k, int depth,
                                int width);

/// Best classification across several clean intervals (clean beats
/// transition beats attack).
IntervalClass classify_window(const std::vector<CleanIntervalTruth>& truths, int k,
                              int depth, std::optional<int> width = std::nullopt);

/// A named adversary behavior plus its ground-truth clean intervals.
struct ScenarioPreset {
  std::string name;
  AttackModel model;
  std::vector<CleanIntervalTruth> clean_intervals;
};

/// The bundled adversary scenarios for a p-sensor system:
///  - "s1_stealth_45": sensors {4,5} replaced by a pure sine for all k
///  - "eq22_ramp_123": growing state-feedback ramp on sensors {1,2,3} from
///    k = 100 onward
///  - "s2_piecewise_1234": two attack bursts on sensors {1,2,3,4} holding
///    frozen-state offsets, leaving [0,139] and [266,391] clean
/// `sample_period` scales the sine frequency; `horizon` fixes the schedule
/// end.
std::vector<ScenarioPreset> scenario_library(int horizon, double sample_period);

/// Lookup by name; throws std::invalid_argument for unknown names.
ScenarioPreset scenario_preset(const std::string& name, int horizon, double sample_period);

}  // namespace sadet::attack
