#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "sadet/hankel.hpp"
#include "sadet/linalg.hpp"
#include "sadet/types.hpp"

namespace sadet::detect {

/// Shared knobs for all detection and identification routines.
///
/// `n_bound` is an upper bound on the (unknown) state dimension; it is used
/// only to check hypotheses, never inside the decision rules themselves.
/// `residual_eps` of 0 selects a data-derived threshold: the measured
/// kernel annihilation floor times 1e5, floored at 1e-7 absolute.
/// `t_star` of 0 selects the per-route default window width.
struct DetectorConfig {
  int q{1};
  int l{0};
  int n_bound{0};
  linalg::RankTolerance rank_tol{};
  double residual_eps{0.0};
  bool parallel{false};
  int t_star{0};

  void validate() const;
};

enum class Verdict { no_attack, attack };

/// Output of the rank-based detectors. Route A (subset scan) fills
/// `subset_ranks`; route B (sliding window) fills `window_ranks`.
struct DetectionReport {
  Verdict verdict{Verdict::no_attack};
  std::vector<std::pair<SensorSet, Eigen::Index>> subset_ranks;
  std::vector<Eigen::Index> window_ranks;
  int t_star{0};
  int mu{0};
  DetectorConfig config;
  bool degenerate{false};
  std::string caveat;

  bool operator==(const DetectionReport&) const;
};

/// Output of the identification routines. `candidates` is the full set of
/// minimum-rank (route A) or below-threshold (route B) sensor sets, ordered
/// by cardinality then lexicographically; `gamma_star` is its first
/// element. `vacuous_filters` lists sets whose residual filter had zero
/// rows, making their residuals trivially zero.
struct IdentificationReport {
  SensorSet gamma_star;
  std::vector<SensorSet> candidates;
  std::vector<std::pair<SensorSet, double>> max_residuals;
  std::vector<std::pair<SensorSet, Eigen::VectorXd>> sigma_profiles;
  std::vector<SensorSet> vacuous_filters;
  double residual_eps_used{0.0};
  int t_star{0};
  DetectorConfig config;

  bool operator==(const IdentificationReport&) const;
};

/// Rank scan over every sensor subset of size at most l: computes
/// rank [U-Hankel; Y-Hankel restricted to the complement] per subset and
/// reports an attack when the ranks disagree. Requires persistency of
/// excitation of order q and a data horizon of at least m q + n_bound
/// windows.
DetectionReport detect_sparse(const data::IoDataset& data, const DetectorConfig& cfg);

/// Picks the compromised set from a detect_sparse report: the candidates
/// are the rank minimizers, and the smallest-cardinality one wins, with
/// lexicographic order breaking ties. Requires an attack verdict.
IdentificationReport identify_sparse(const DetectionReport& report,
                                     const DetectorConfig& cfg);

/// Sliding-window rank scan: with T* = max{(m+p) q, mu_q} (or the
/// configured override), computes the rank of every width-T* window of the
/// stacked data matrix and reports an attack when the rank varies over the
/// start index. Detection is guaranteed only when some attack-free
/// stretch of at least T* + q - 2 samples exists.
DetectionReport detect_partial_clean(const data::IoDataset& data,
                                     const DetectorConfig& cfg);

/// Left-kernel basis of the width-T* stacked data window starting at t.
linalg::KernelBasis kernel_at(const data::IoDataset& data, const DetectorConfig& cfg,
                              int t, int t_star);

/// Block-diagonal selector with `depth` copies of the column-selected
/// identity: maps stacked restricted outputs into stacked full outputs.
Eigen::MatrixXd selector_matrix(const SensorSet& sensors, int depth);

/// Filter annihilating the selected output columns of the kernel: P with
/// P * Q2 * selector = 0, where Q2 is the output part (last p*q columns)
/// of the kernel basis. A kernel with zero rows yields a zero-row filter.
Eigen::MatrixXd filter_matrix(const linalg::KernelBasis& kernel, const SensorSet& sensors,
                              int depth, const linalg::RankTolerance& tol = {});

/// Residual of the depth-q data window at k through the given kernel and
/// filter: filter * kernel * [u-window; y-window].
Eigen::VectorXd residual(const data::IoDataset& data, const linalg::KernelBasis& kernel,
                         const Eigen::MatrixXd& filter, int k, int depth);

/// Kernel/filter identification sweep: for every window start t, every
/// sensor subset of size at most l, and every sample window k, computes the
/// filtered residual; the candidate sets are those whose residuals stay
/// below the threshold for all (t, k). Also accumulates the per-sample
/// residual sums sigma. Requires persistency of excitation of order
/// q + n_bound.
IdentificationReport identify_partial_clean(const data::IoDataset& data,
                                            const DetectorConfig& cfg);

}  // namespace sadet::detect
