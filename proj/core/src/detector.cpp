#include "sadet/detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace sadet::detect {

namespace {

constexpr double kResidualEpsFloor = 1e-7;
// The measured annihilation floor sits at the SVD truncation level
// (~1e-14 * sigma_max); scaling it by 1e5 gives a threshold that tracks the
// data magnitude while staying far below any genuine attack residual.
constexpr double kResidualFloorScale = 1e5;

void run_chunked(int count, bool parallel, const std::function<void(int, int)>& body) {
  int workers = 1;
  if (parallel && count > 1) {
    const unsigned hw = std::thread::hardware_concurrency();
    // at least two workers so the parallel path is real even on one core
    workers = std::min<int>(count, std::max<int>(2, hw > 0 ? static_cast<int>(hw) : 1));
  }
  if (workers <= 1) {
    body(0, count);
    return;
  }
  const int chunk = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(body, begin, end);
  }
  for (auto& t : threads) t.join();
}

bool tol_equal(const linalg::RankTolerance& a, const linalg::RankTolerance& b) {
  return a.mode == b.mode && a.value == b.value;
}

bool config_equal(const DetectorConfig& a, const DetectorConfig& b) {
  return a.q == b.q && a.l == b.l && a.n_bound == b.n_bound &&
         tol_equal(a.rank_tol, b.rank_tol) && a.residual_eps == b.residual_eps &&
         a.parallel == b.parallel && a.t_star == b.t_star;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  return values[mid];
}

}  // namespace

void DetectorConfig::validate() const {
  if (q < 1) throw std::invalid_argument("DetectorConfig: q must be >= 1");
  if (l < 0) throw std::invalid_argument("DetectorConfig: l must be >= 0");
  if (n_bound < 0) throw std::invalid_argument("DetectorConfig: n_bound must be >= 0");
  if (residual_eps < 0.0)
    throw std::invalid_argument("DetectorConfig: residual_eps must be >= 0");
  if (t_star < 0) throw std::invalid_argument("DetectorConfig: t_star must be >= 0");
  rank_tol.validate();
}

bool DetectionReport::operator==(const DetectionReport& o) const {
  return verdict == o.verdict && subset_ranks == o.subset_ranks &&
         window_ranks == o.window_ranks && t_star == o.t_star && mu == o.mu &&
         config_equal(config, o.config) && degenerate == o.degenerate && caveat == o.caveat;
}

bool IdentificationReport::operator==(const IdentificationReport& o) const {
  if (!(gamma_star == o.gamma_star) || candidates != o.candidates ||
      max_residuals != o.max_residuals || vacuous_filters != o.vacuous_filters ||
      residual_eps_used != o.residual_eps_used || t_star != o.t_star ||
      !config_equal(config, o.config))
    return false;
  if (sigma_profiles.size() != o.sigma_profiles.size()) return false;
  for (std::size_t i = 0; i < sigma_profiles.size(); ++i) {
    if (!(sigma_profiles[i].first == o.sigma_profiles[i].first)) return false;
    if (sigma_profiles[i].second.size() != o.sigma_profiles[i].second.size()) return false;
    if (sigma_profiles[i].second != o.sigma_profiles[i].second) return false;
  }
  return true;
}

DetectionReport detect_sparse(const data::IoDataset& data, const DetectorConfig& cfg) {
  cfg.validate();
  const int m = data.m();
  const int p = data.p();
  const int N = data.length();
  if (cfg.l >= p)
    throw std::invalid_argument("detect_sparse: requires l < p (every subset must leave "
                                "at least one sensor)");
  if (!data::is_persistently_exciting(data, cfg.q, cfg.rank_tol))
    throw ExcitationError("detect_sparse: input is not persistently exciting of order " +
                          std::to_string(cfg.q));
  if (N - cfg.q + 1 < m * cfg.q + cfg.n_bound)
    throw WindowError("detect_sparse: data horizon too short, need N - q + 1 >= m q + n_bound");

  const auto subsets = subsets_up_to(p, cfg.l);
  DetectionReport report;
  report.config = cfg;
  report.subset_ranks.resize(subsets.size());

  run_chunked(static_cast<int>(subsets.size()), cfg.parallel, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const SensorSet& gamma = subsets[static_cast<std::size_t>(i)];
      const Eigen::MatrixXd z = data::stack_z(data, gamma.complement(), cfg.q);
      report.subset_ranks[static_cast<std::size_t>(i)] = {
          gamma, linalg::numerical_rank(z, cfg.rank_tol)};
    }
  });

  const Eigen::Index first = report.subset_ranks.front().second;
  const bool constant = std::all_of(
      report.subset_ranks.begin(), report.subset_ranks.end(),
      [&](const auto& entry) { return entry.second == first; });
  report.verdict = constant ? Verdict::no_attack : Verdict::attack;
  if (report.subset_ranks.size() <= 1) {
    report.degenerate = true;
    report.caveat = "only one sensor subset available; rank comparison is vacuous";
  }
  return report;
}

IdentificationReport identify_sparse(const DetectionReport& report,
                                     const DetectorConfig& cfg) {
  if (report.subset_ranks.empty())
    throw std::invalid_argument("identify_sparse: report carries no subset ranks");
  if (report.verdict != Verdict::attack)
    throw std::invalid_argument("identify_sparse: requires an attack verdict");

  Eigen::Index min_rank = report.subset_ranks.front().second;
  for (const auto& [gamma, rank] : report.subset_ranks) min_rank = std::min(min_rank, rank);

  IdentificationReport out;
  out.config = cfg;
  out.t_star = report.t_star;
  for (const auto& [gamma, rank] : report.subset_ranks)
    if (rank == min_rank) out.candidates.push_back(gamma);
  // subset_ranks is ordered by cardinality then lexicographically, so the
  // first minimizer is the smallest-cardinality candidate with ties broken
  // lexicographically.
  out.gamma_star = out.candidates.front();
  return out;
}

namespace {

struct PartialCleanSetup {
  int mu{0};
  int t_star{0};
  int window_count{0};  // number of admissible window starts
};

PartialCleanSetup partial_clean_setup(const data::IoDataset& data, const DetectorConfig& cfg,
                                      int excitation_order) {
  PartialCleanSetup setup;
  if (!data::is_persistently_exciting(data, excitation_order, cfg.rank_tol))
    throw ExcitationError("partial-clean detector: input is not persistently exciting of order " +
                          std::to_string(excitation_order));
  setup.mu = data::min_excitability_horizon(data, excitation_order, cfg.rank_tol);
  const int default_t = std::max((data.m() + data.p()) * cfg.q, setup.mu);
  setup.t_star = cfg.t_star > 0 ? cfg.t_star : default_t;
  if (setup.t_star < setup.mu)
    throw std::invalid_argument("partial-clean detector: window width below the minimum "
                                "excitability horizon " + std::to_string(setup.mu));
  setup.window_count = data.length() - setup.t_star - cfg.q + 2;
  if (setup.window_count < 1)
    throw WindowError("partial-clean detector: no window of width " +
                      std::to_string(setup.t_star) + " fits the data horizon");
  return setup;
}

}  // namespace

DetectionReport detect_partial_clean(const data::IoDataset& data, const DetectorConfig& cfg) {
  cfg.validate();
  if (cfg.q < cfg.n_bound + 1)
    throw std::invalid_argument("detect_partial_clean: requires q >= n_bound + 1");
  const auto setup = partial_clean_setup(data, cfg, cfg.q);

  DetectionReport report;
  report.config = cfg;
  report.mu = setup.mu;
  report.t_star = setup.t_star;
  report.window_ranks.assign(static_cast<std::size_t>(setup.window_count), 0);

  const Eigen::MatrixXd z = data::stack_z(data, SensorSet::full(data.p()), cfg.q);
  run_chunked(setup.window_count, cfg.parallel, [&](int begin, int end) {
    for (int k = begin; k < end; ++k)
      report.window_ranks[static_cast<std::size_t>(k)] =
          linalg::numerical_rank(z.middleCols(k, setup.t_star), cfg.rank_tol);
  });

  const Eigen::Index first = report.window_ranks.front();
  const bool constant =
      std::all_of(report.window_ranks.begin(), report.window_ranks.end(),
                  [&](Eigen::Index r) { return r == first; });
  report.verdict = constant ? Verdict::no_attack : Verdict::attack;
  report.caveat =
      "detection is guaranteed only if some attack-free stretch spans at least "
      "T* + q - 2 = " + std::to_string(setup.t_star + cfg.q - 2) + " samples";
  return report;
}

linalg::KernelBasis kernel_at(const data::IoDataset& data, const DetectorConfig& cfg, int t,
                              int t_star) {
  cfg.validate();
  return linalg::left_kernel_basis(
      data::stack_z(data, SensorSet::full(data.p()), cfg.q, t, t_star), cfg.rank_tol);
}

Eigen::MatrixXd selector_matrix(const SensorSet& sensors, int depth) {
  if (depth < 1) throw std::invalid_argument("selector_matrix: depth must be >= 1");
  const int p = sensors.ambient();
  const int s = sensors.size();
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p) * depth,
                                              static_cast<Eigen::Index>(s) * depth);
  const auto rows = sensors.row_indices();
  for (int block = 0; block < depth; ++block)
    for (int i = 0; i < s; ++i)
      sel(static_cast<Eigen::Index>(block) * p + rows[static_cast<std::size_t>(i)],
          static_cast<Eigen::Index>(block) * s + i) = 1.0;
  return sel;
}

namespace {

// Columns of Q2 * selector, picked directly: block b, member i maps to
// kernel column m*q + b*p + (id-1).
Eigen::MatrixXd selected_output_columns(const Eigen::MatrixXd& kernel_rows, int input_cols,
                                        const SensorSet& sensors, int depth) {
  const int p = sensors.ambient();
  const auto rows = sensors.row_indices();
  const int s = sensors.size();
  Eigen::MatrixXd picked(kernel_rows.rows(), static_cast<Eigen::Index>(s) * depth);
  for (int block = 0; block < depth; ++block)
    for (int i = 0; i < s; ++i)
      picked.col(static_cast<Eigen::Index>(block) * s + i) = kernel_rows.col(
          input_cols + static_cast<Eigen::Index>(block) * p + rows[static_cast<std::size_t>(i)]);
  return picked;
}

}  // namespace

Eigen::MatrixXd filter_matrix(const linalg::KernelBasis& kernel, const SensorSet& sensors,
                              int depth, const linalg::RankTolerance& tol) {
  if (depth < 1) throw std::invalid_argument("filter_matrix: depth must be >= 1");
  const Eigen::Index pq = static_cast<Eigen::Index>(sensors.ambient()) * depth;
  const Eigen::Index input_cols = kernel.ambient_dim - pq;
  if (input_cols < 0 || input_cols % depth != 0)
    throw DimensionError("filter_matrix: kernel width does not decompose into input and "
                         "output blocks of the given depth");
  if (kernel.rows.rows() == 0) return Eigen::MatrixXd(0, 0);
  if (sensors.is_empty())
    return Eigen::MatrixXd::Identity(kernel.rows.rows(), kernel.rows.rows());
  const Eigen::MatrixXd picked =
      selected_output_columns(kernel.rows, static_cast<int>(input_cols), sensors, depth);
  return linalg::left_annihilator_of_columns(picked, tol);
}

Eigen::VectorXd residual(const data::IoDataset& data, const linalg::KernelBasis& kernel,
                         const Eigen::MatrixXd& filter, int k, int depth) {
  if (kernel.ambient_dim != static_cast<Eigen::Index>(data.m() + data.p()) * depth)
    throw DimensionError("residual: kernel does not match the dataset dimensions");
  if (filter.cols() != kernel.rows.rows())
    throw DimensionError("residual: filter and kernel dimensions do not match");
  return filter * (kernel.rows * data::io_window(data, depth, k));
}

IdentificationReport identify_partial_clean(const data::IoDataset& data,
                                            const DetectorConfig& cfg) {
  cfg.validate();
  const int m = data.m();
  const int p = data.p();
  const int N = data.length();
  const int q = cfg.q;
  if (cfg.l > p) throw std::invalid_argument("identify_partial_clean: l exceeds sensor count");
  const auto setup = partial_clean_setup(data, cfg, q + cfg.n_bound);
  const int t_star = setup.t_star;
  const int t_count = N - t_star - q + 2;
  if (t_count < 1)
    throw WindowError("identify_partial_clean: no window of width " + std::to_string(t_star) +
                      " fits the data horizon");

  const auto subsets = subsets_up_to(p, cfg.l);
  const int subset_count = static_cast<int>(subsets.size());
  const int k_count = N - q + 1;
  const Eigen::MatrixXd z = data::stack_z(data, SensorSet::full(p), q);
  const Eigen::Index ambient = static_cast<Eigen::Index>(m + p) * q;
  const Eigen::Index input_cols = static_cast<Eigen::Index>(m) * q;

  std::vector<double> max_residual(static_cast<std::size_t>(subset_count), 0.0);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(subset_count, k_count);
  std::vector<char> constrained(static_cast<std::size_t>(subset_count), 0);
  std::vector<double> floors(static_cast<std::size_t>(t_count), 0.0);
  std::vector<Eigen::Index> window_ranks(static_cast<std::size_t>(t_count), 0);

  struct Partial {
    int t_begin{0};
    std::vector<double> max_residual;
    Eigen::MatrixXd sigma;
    std::vector<char> constrained;
  };
  std::vector<Partial> partials;
  std::mutex merge_mutex;

  auto sweep = [&](int t_begin, int t_end) {
    Partial local;
    local.t_begin = t_begin;
    local.max_residual.assign(static_cast<std::size_t>(subset_count), 0.0);
    local.sigma = Eigen::MatrixXd::Zero(subset_count, k_count);
    local.constrained.assign(static_cast<std::size_t>(subset_count), 0);

    for (int t = t_begin; t < t_end; ++t) {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(z.middleCols(t, t_star), Eigen::ComputeFullU);
      const Eigen::VectorXd& sv = svd.singularValues();
      const double cut = cfg.rank_tol.cutoff(sv.size() > 0 ? sv(0) : 0.0);
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
      window_ranks[static_cast<std::size_t>(t)] = rank;
      if (rank == ambient) {
        floors[static_cast<std::size_t>(t)] = 0.0;
        continue;  // zero-row kernel, no constraints from this window
      }
      const Eigen::MatrixXd kernel = svd.matrixU().rightCols(ambient - rank).transpose();
      const Eigen::MatrixXd kz = kernel * z;
      floors[static_cast<std::size_t>(t)] =
          kz.middleCols(t, t_star).colwise().norm().maxCoeff();

      for (int gi = 0; gi < subset_count; ++gi) {
        const SensorSet& gamma = subsets[static_cast<std::size_t>(gi)];
        Eigen::MatrixXd filter;
        if (gamma.is_empty()) {
          filter = Eigen::MatrixXd::Identity(kernel.rows(), kernel.rows());
        } else {
          const Eigen::MatrixXd picked =
              selected_output_columns(kernel, static_cast<int>(input_cols), gamma, q);
          filter = linalg::left_annihilator_of_columns(picked, cfg.rank_tol);
        }
        if (filter.rows() == 0) continue;  // vacuously zero residuals
        local.constrained[static_cast<std::size_t>(gi)] = 1;
        const Eigen::MatrixXd filtered = filter * kz;
        for (int k = 0; k < k_count; ++k) {
          const double norm = filtered.col(k).norm();
          local.max_residual[static_cast<std::size_t>(gi)] =
              std::max(local.max_residual[static_cast<std::size_t>(gi)], norm);
          local.sigma(gi, k) += norm;
        }
      }
    }

    std::lock_guard<std::mutex> lock(merge_mutex);
    partials.push_back(std::move(local));
  };

  run_chunked(t_count, cfg.parallel, sweep);

  // Floating sums only commute approximately, so merge partials in their
  // chunk order to keep results reproducible for a fixed worker count.
  std::sort(partials.begin(), partials.end(),
            [](const Partial& a, const Partial& b) { return a.t_begin < b.t_begin; });
  for (const auto& part : partials) {
    for (int gi = 0; gi < subset_count; ++gi) {
      max_residual[static_cast<std::size_t>(gi)] =
          std::max(max_residual[static_cast<std::size_t>(gi)],
                   part.max_residual[static_cast<std::size_t>(gi)]);
      if (part.constrained[static_cast<std::size_t>(gi)])
        constrained[static_cast<std::size_t>(gi)] = 1;
    }
    sigma += part.sigma;
  }

  double eps = cfg.residual_eps;
  if (eps == 0.0) {
    Eigen::Index min_rank = *std::min_element(window_ranks.begin(), window_ranks.end());
    std::vector<double> clean_floors;
    for (int t = 0; t < t_count; ++t)
      if (window_ranks[static_cast<std::size_t>(t)] == min_rank)
        clean_floors.push_back(floors[static_cast<std::size_t>(t)]);
    eps = std::max(kResidualEpsFloor, kResidualFloorScale * median(std::move(clean_floors)));
  }

  IdentificationReport report;
  report.config = cfg;
  report.t_star = t_star;
  report.residual_eps_used = eps;
  for (int gi = 0; gi < subset_count; ++gi) {
    const SensorSet& gamma = subsets[static_cast<std::size_t>(gi)];
    report.max_residuals.emplace_back(gamma, max_residual[static_cast<std::size_t>(gi)]);
    report.sigma_profiles.emplace_back(gamma, sigma.row(gi).transpose());
    if (!constrained[static_cast<std::size_t>(gi)]) report.vacuous_filters.push_back(gamma);
    if (max_residual[static_cast<std::size_t>(gi)] <= eps) report.candidates.push_back(gamma);
  }
  if (report.candidates.empty())
    throw IdentificationError("identify_partial_clean: no sensor set passes the residual "
                              "threshold; residual_eps may be too small or the data violate "
                              "the clean-interval assumption");
  report.gamma_star = report.candidates.front();
  return report;
}

}  // namespace sadet::detect
