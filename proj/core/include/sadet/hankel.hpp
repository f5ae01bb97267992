#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sadet/linalg.hpp"
#include "sadet/system.hpp"
#include "sadet/types.hpp"

namespace sadet::data {

/// The evidence available to every detector: an input sequence and a
/// possibly compromised output sequence of equal length, column-per-sample.
struct IoDataset {
  Eigen::MatrixXd inputs;   // m x N
  Eigen::MatrixXd outputs;  // p x N

  IoDataset(Eigen::MatrixXd u, Eigen::MatrixXd y);

  static IoDataset from_trajectory(const model::Trajectory& traj) {
    return IoDataset(traj.inputs, traj.outputs_observed);
  }

  int m() const { return static_cast<int>(inputs.rows()); }
  int p() const { return static_cast<int>(outputs.rows()); }
  int length() const { return static_cast<int>(inputs.cols()); }
};

enum class Signal { inputs, outputs };

/// A realized block-Hankel matrix: column j stacks the depth-q signal
/// window starting at sample start + j.
struct HankelView {
  Signal source{Signal::inputs};
  SensorSet sensors;  // meaningful for outputs; defaults to the full set
  int depth{0};
  int start{0};
  int width{0};
  Eigen::MatrixXd matrix;  // (dim * depth) x width
};

/// Full-length Hankel of the chosen signal: width N - depth + 1. For
/// outputs, `sensors` (when given) selects the retained rows.
HankelView hankel(const IoDataset& data, Signal which, int depth,
                  const SensorSet* sensors = nullptr);

/// Width-`width` slice starting at column `start`; equals the corresponding
/// column block of the full Hankel.
HankelView windowed_hankel(const IoDataset& data, Signal which, int depth, int start,
                           int width, const SensorSet* sensors = nullptr);

/// Stacked data matrix [input Hankel; output Hankel restricted to
/// `sensors`]. An empty sensor set yields the input-only stack.
Eigen::MatrixXd stack_z(const IoDataset& data, const SensorSet& sensors, int depth);

/// Windowed variant covering columns [start, start+width).
Eigen::MatrixXd stack_z(const IoDataset& data, const SensorSet& sensors, int depth,
                        int start, int width);

/// One depth-q input/output window [u; y] starting at sample k.
Eigen::VectorXd io_window(const IoDataset& data, int depth, int k);

/// True when the depth-`order` input Hankel has full row rank m * order.
bool is_persistently_exciting(const IoDataset& data, int order,
                              const linalg::RankTolerance& tol = {});

/// Smallest width T in [m*order, N-order+1] such that every width-T input
/// Hankel slice has full row rank; throws ExcitationError when none exists.
int min_excitability_horizon(const IoDataset& data, int order,
                             const linalg::RankTolerance& tol = {});

}  // namespace sadet::data
