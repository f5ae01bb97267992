#include "sadet/attack.hpp"

#include <algorithm>
#include <cmath>

namespace sadet::attack {

void AttackModel::validate(int horizon) const {
  std::vector<std::pair<int, int>> spans;
  for (const auto& window : schedule) {
    if (window.first > window.last)
      throw std::invalid_argument("AttackModel: schedule window with first > last");
    if (window.first < 0 || window.last > horizon - 1)
      throw std::invalid_argument("AttackModel: schedule window outside [0, N-1]");
    if (window.sensors && !support.contains_all(*window.sensors))
      throw std::invalid_argument("AttackModel: schedule references sensors outside support");
    spans.emplace_back(window.first, window.last);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first <= spans[i - 1].second)
      throw std::invalid_argument("AttackModel: overlapping schedule windows");
}

Eigen::VectorXd eval_attack(const AttackModel& model, const model::LtiSystem& sys,
                            const Eigen::MatrixXd& states, int k) {
  const int p = sys.p();
  if (model.support.ambient() != p)
    throw DimensionError("eval_attack: support does not match the system sensor count");
  if (states.rows() != sys.n())
    throw DimensionError("eval_attack: state dimension mismatch");
  if (k < 0 || k >= states.cols())
    throw WindowError("eval_attack: sample index outside the trajectory");

  Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
  for (const auto& window : model.schedule) {
    if (k < window.first || k > window.last) continue;
    const Generator& g = window.generator;
    if (g.frozen_index >= 0 && g.frozen_index >= states.cols())
      throw WindowError("eval_attack: frozen state index outside the trajectory");
    const SensorSet& targets = window.sensors ? *window.sensors : model.support;
    const double sine =
        g.sine_amplitude == 0.0
            ? 0.0
            : g.sine_amplitude * std::sin(g.sine_omega * k + g.sine_phase);
    for (int id : targets.ids()) {
      const auto row = sys.C.row(id - 1);
      double value = (g.state_gain + g.ramp_gain * k) * row.dot(states.col(k)) + sine;
      if (g.frozen_index >= 0) value += g.frozen_gain * row.dot(states.col(g.frozen_index));
      a(id - 1) += value;
    }
  }
  return a;
}

namespace {

bool in_range(int k, int lo, int hi) { return lo <= k && k <= hi; }

}  // namespace

IntervalClass classify_interval(const CleanIntervalTruth& truth, int k, int depth) {
  const int k0 = truth.start;
  const int tau = truth.length;
  if (in_range(k, k0, k0 + tau - depth)) return IntervalClass::clean;
  if (in_range(k, k0 - depth + 1, k0 - 1) ||
      in_range(k, k0 + tau - depth + 1, k0 + tau - 1))
    return IntervalClass::transition;
  return IntervalClass::attack;
}

IntervalClass classify_interval(const CleanIntervalTruth& truth, int k, int depth,
                                int width) {
  const int k0 = truth.start;
  const int tau = truth.length;
  if (in_range(k, k0, k0 + tau - width - depth + 1)) return IntervalClass::clean;
  if (in_range(k, k0 - width - depth + 2, k0 - 1) ||
      in_range(k, k0 + tau - width - depth + 2, k0 + tau - 1))
    return IntervalClass::transition;
  return IntervalClass::attack;
}

IntervalClass classify_window(const std::vector<CleanIntervalTruth>& truths, int k,
                              int depth, std::optional<int> width) {
  IntervalClass best = IntervalClass::attack;
  for (const auto& truth : truths) {
    const IntervalClass c = width ? classify_interval(truth, k, depth, *width)
                                  : classify_interval(truth, k, depth);
    if (c == IntervalClass::clean) return IntervalClass::clean;
    if (c == IntervalClass::transition) best = IntervalClass::transition;
  }
  return best;
}

std::vector<ScenarioPreset> scenario_library(int horizon, double sample_period) {
  if (horizon < 1) throw std::invalid_argument("scenario_library: horizon must be >= 1");
  const int last = horizon - 1;
  const double omega = 0.5 * sample_period;
  std::vector<ScenarioPreset> presets;

  {
    // Sensors 4 and 5 report a pure sine: the state content is cancelled
    // and replaced, so the compromised channels look plausibly alive.
    ScenarioPreset s1;
    s1.name = "s1_stealth_45";
    s1.model.support = SensorSet({4, 5}, 5);
    Generator g;
    g.state_gain = -1.0;
    g.sine_amplitude = 0.5;
    g.sine_omega = omega;
    s1.model.schedule.push_back({0, last, g, std::nullopt});
    presets.push_back(std::move(s1));
  }

  {
    // Growing state-feedback ramp from k = 100 on the first three sensors.
    // At exactly k = 100 the two terms cancel and the injection is zero.
    ScenarioPreset ramp;
    ramp.name = "eq22_ramp_123";
    ramp.model.support = SensorSet({1, 2, 3}, 5);
    Generator g;
    g.state_gain = -1.0;
    g.ramp_gain = 0.01;
    if (horizon > 100) ramp.model.schedule.push_back({100, last, g, std::nullopt});
    ramp.clean_intervals.push_back({0, std::min(horizon, 100)});
    presets.push_back(std::move(ramp));
  }

  {
    // Two attack bursts holding a frozen-state offset, with clean gaps
    // [0,139] and [266,391].
    ScenarioPreset s2;
    s2.name = "s2_piecewise_1234";
    s2.model.support = SensorSet({1, 2, 3, 4}, 5);
    Generator g1;
    g1.state_gain = -2.0;
    g1.frozen_gain = -2.0;
    g1.frozen_index = 139;
    Generator g2 = g1;
    g2.frozen_index = 391;
    if (horizon > 140) s2.model.schedule.push_back({140, std::min(last, 265), g1, std::nullopt});
    if (horizon > 392) s2.model.schedule.push_back({392, last, g2, std::nullopt});
    s2.clean_intervals.push_back({0, std::min(horizon, 140)});
    if (horizon > 266) s2.clean_intervals.push_back({266, std::min(horizon, 392) - 266});
    presets.push_back(std::move(s2));
  }

  return presets;
}

ScenarioPreset scenario_preset(const std::string& name, int horizon, double sample_period) {
  for (auto& preset : scenario_library(horizon, sample_period))
    if (preset.name == name) return preset;
  throw std::invalid_argument("scenario_preset: unknown preset '" + name + "'");
}

}  // namespace sadet::attack
