#include "sadet/hankel.hpp"

namespace sadet::data {

IoDataset::IoDataset(Eigen::MatrixXd u, Eigen::MatrixXd y)
    : inputs(std::move(u)), outputs(std::move(y)) {
  if (inputs.rows() < 1 || outputs.rows() < 1)
    throw DimensionError("IoDataset: need at least one input and one output channel");
  if (inputs.cols() != outputs.cols())
    throw DimensionError("IoDataset: input and output lengths differ");
  if (inputs.cols() < 1) throw DimensionError("IoDataset: empty dataset");
  if (!inputs.allFinite() || !outputs.allFinite())
    throw DataQualityError("IoDataset: non-finite entries");
}

namespace {

Eigen::MatrixXd select_signal(const IoDataset& data, Signal which,
                              const SensorSet* sensors) {
  if (which == Signal::inputs) return data.inputs;
  if (!sensors) return data.outputs;
  if (sensors->ambient() != data.p())
    throw DimensionError("hankel: sensor set does not match the dataset");
  const auto rows = sensors->row_indices();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), data.length());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = data.outputs.row(rows[i]);
  return out;
}

Eigen::MatrixXd build_hankel(const Eigen::MatrixXd& signal, int depth, int start,
                             int width) {
  const Eigen::Index dim = signal.rows();
  Eigen::MatrixXd H(dim * depth, width);
  for (int j = 0; j < width; ++j)
    for (int i = 0; i < depth; ++i)
      H.block(static_cast<Eigen::Index>(i) * dim, j, dim, 1) = signal.col(start + j + i);
  return H;
}

void check_window(const IoDataset& data, int depth, int start, int width) {
  if (depth < 1) throw WindowError("hankel: depth must be >= 1");
  if (start < 0 || width < 1) throw WindowError("hankel: invalid window position");
  if (start + width + depth - 1 > data.length())
    throw WindowError("hankel: window [" + std::to_string(start) + ", width " +
                      std::to_string(width) + ", depth " + std::to_string(depth) +
                      "] exceeds the data horizon N = " + std::to_string(data.length()));
}

}  // namespace

HankelView hankel(const IoDataset& data, Signal which, int depth, const SensorSet* sensors) {
  return windowed_hankel(data, which, depth, 0, data.length() - depth + 1, sensors);
}

HankelView windowed_hankel(const IoDataset& data, Signal which, int depth, int start,
                           int width, const SensorSet* sensors) {
  check_window(data, depth, start, width);
  HankelView view;
  view.source = which;
  view.sensors = (which == Signal::outputs && sensors) ? *sensors : SensorSet::full(data.p());
  view.depth = depth;
  view.start = start;
  view.width = width;
  view.matrix = build_hankel(select_signal(data, which, sensors), depth, start, width);
  return view;
}

Eigen::MatrixXd stack_z(const IoDataset& data, const SensorSet& sensors, int depth) {
  return stack_z(data, sensors, depth, 0, data.length() - depth + 1);
}

Eigen::MatrixXd stack_z(const IoDataset& data, const SensorSet& sensors, int depth,
                        int start, int width) {
  check_window(data, depth, start, width);
  const Eigen::MatrixXd u = build_hankel(data.inputs, depth, start, width);
  const Eigen::MatrixXd y =
      build_hankel(select_signal(data, Signal::outputs, &sensors), depth, start, width);
  Eigen::MatrixXd z(u.rows() + y.rows(), width);
  z.topRows(u.rows()) = u;
  z.bottomRows(y.rows()) = y;
  return z;
}

Eigen::VectorXd io_window(const IoDataset& data, int depth, int k) {
  check_window(data, depth, k, 1);
  const int m = data.m();
  const int p = data.p();
  Eigen::VectorXd z(static_cast<Eigen::Index>(m + p) * depth);
  for (int i = 0; i < depth; ++i) {
    z.segment(static_cast<Eigen::Index>(i) * m, m) = data.inputs.col(k + i);
    z.segment(static_cast<Eigen::Index>(depth) * m + static_cast<Eigen::Index>(i) * p, p) =
        data.outputs.col(k + i);
  }
  return z;
}

bool is_persistently_exciting(const IoDataset& data, int order,
                              const linalg::RankTolerance& tol) {
  if (order < 1 || order > data.length())
    throw WindowError("is_persistently_exciting: order outside [1, N]");
  const Eigen::MatrixXd U = build_hankel(data.inputs, order, 0, data.length() - order + 1);
  return linalg::numerical_rank(U, tol) == static_cast<Eigen::Index>(data.m()) * order;
}

int min_excitability_horizon(const IoDataset& data, int order,
                             const linalg::RankTolerance& tol) {
  if (!is_persistently_exciting(data, order, tol))
    throw ExcitationError("min_excitability_horizon: input is not persistently exciting of order " +
                          std::to_string(order));
  const int N = data.length();
  const Eigen::Index full = static_cast<Eigen::Index>(data.m()) * order;
  const Eigen::MatrixXd U = build_hankel(data.inputs, order, 0, N - order + 1);
  // Full-rank-for-all-starts is not monotone in the width, so scan upward.
  for (int width = data.m() * order; width <= N - order + 1; ++width) {
    bool all_full = true;
    for (int start = 0; start <= N - width - order + 1; ++start) {
      if (linalg::numerical_rank(U.middleCols(start, width), tol) != full) {
        all_full = false;
        break;
      }
    }
    if (all_full) return width;
  }
  throw ExcitationError("min_excitability_horizon: no window width achieves full excitation");
}

}  // namespace sadet::data
