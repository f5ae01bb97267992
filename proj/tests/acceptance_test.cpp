// End-to-end acceptance suite for the toolkit. Each test prints one
// PASS/FAIL line; run the binary directly or through ctest -R acceptance.

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sadet/attack.hpp"
#include "sadet/csv.hpp"
#include "sadet/detector.hpp"
#include "test_helpers.hpp"

using namespace sadet;
using namespace sadet::detect;

namespace {

class Acceptance : public ::testing::Test {
 protected:
  void Label(const std::string& label) { label_ = label; }
  void TearDown() override {
    std::cout << "[acceptance] " << label_ << ": " << (HasFailure() ? "FAIL" : "PASS")
              << std::endl;
  }

  static DetectorConfig config(int q, int l, int n_bound) {
    DetectorConfig cfg;
    cfg.q = q;
    cfg.l = l;
    cfg.n_bound = n_bound;
    return cfg;
  }

  static double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

 private:
  std::string label_;
};

// Random system plus I/O data with an interval-confined sparse injection;
// used by criteria 6 and 7.
struct CleanIntervalInstance {
  model::LtiSystem sys;
  data::IoDataset data;
  SensorSet support;
  attack::CleanIntervalTruth truth;
  Eigen::MatrixXd injected;  // p x N ground-truth attack matrix
  int q;
  int l;
};

CleanIntervalInstance make_clean_interval_instance(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const int n = 2 + static_cast<int>(gen() % 2);  // 2..3
  const int p = 3 + static_cast<int>(gen() % 2);  // 3..4
  const int m = 1;
  const int q = n + 1;
  const int l = p - 1;
  const model::LtiSystem sys = sadet::testing::random_sparse_observable(gen, n, m, p, 1);

  const int t_star_bound = (m + p) * q;       // identification window default
  const int tau = t_star_bound + q - 2 + 8;   // comfortably above the minimum
  const int k0 = q + n + 3;
  const int N = k0 + tau + q + 8;

  const Eigen::MatrixXd u = sadet::testing::random_matrix(gen, m, N);
  const model::Trajectory traj = model::simulate(sys, Eigen::VectorXd::Zero(n), u);

  const int support_size = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(l));
  std::vector<int> ids;
  while (static_cast<int>(ids.size()) < support_size) {
    const int id = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(p));
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  const SensorSet support(ids, p);

  Eigen::MatrixXd injected = Eigen::MatrixXd::Zero(p, N);
  for (int k = 0; k < N; ++k) {
    if (k >= k0 && k < k0 + tau) continue;  // the clean interval
    for (int row : support.row_indices())
      injected(row, k) = sadet::testing::uniform_pm1(gen) + 0.1;
  }
  return CleanIntervalInstance{sys,
                               data::IoDataset(traj.inputs, traj.outputs_clean + injected),
                               support,
                               attack::CleanIntervalTruth{k0, tau},
                               injected,
                               q,
                               l};
}

}  // namespace

// Scenario-1 rank table and identification with the stealth attack on
// sensors {4,5}.
TEST_F(Acceptance, Criterion1_Scenario1RankTable) {
  Label("criterion 1: scenario-1 rank table and identification");
  const auto start = std::chrono::steady_clock::now();
  const auto& bench = sadet::testing::benchmark();
  const data::IoDataset data = sadet::testing::dataset_of(bench.s1);
  const DetectorConfig cfg = config(10, 2, 6);

  const DetectionReport detection = detect_sparse(data, cfg);
  EXPECT_EQ(detection.verdict, Verdict::attack);
  const SensorSet truth({4, 5}, 5);
  for (const auto& [gamma, rank] : detection.subset_ranks) {
    if (gamma.contains_all(truth)) {
      EXPECT_EQ(rank, 16) << "gamma = " << gamma.to_string();
    } else {
      EXPECT_EQ(rank, 18) << "gamma = " << gamma.to_string();
    }
  }
  const IdentificationReport id = identify_sparse(detection, cfg);
  EXPECT_EQ(id.gamma_star, truth) << "identified " << id.gamma_star.to_string();
  EXPECT_LT(seconds_since(start), 10.0);
}

// Attack-free data: constant rank 16 on both detection routes.
TEST_F(Acceptance, Criterion2_CleanDataConstancy) {
  Label("criterion 2: clean-data rank constancy on both routes");
  const auto& bench = sadet::testing::benchmark();
  const data::IoDataset data = sadet::testing::dataset_of(bench.clean);
  const DetectorConfig cfg = config(10, 2, 6);

  const DetectionReport route_a = detect_sparse(data, cfg);
  EXPECT_EQ(route_a.verdict, Verdict::no_attack);
  EXPECT_EQ(route_a.subset_ranks.size(), 16u);
  for (const auto& [gamma, rank] : route_a.subset_ranks)
    EXPECT_EQ(rank, 16) << "gamma = " << gamma.to_string();

  const DetectionReport route_b = detect_partial_clean(data, cfg);
  EXPECT_EQ(route_b.t_star, 60);
  EXPECT_EQ(route_b.verdict, Verdict::no_attack);
  for (std::size_t k = 0; k < route_b.window_ranks.size(); ++k)
    EXPECT_EQ(route_b.window_ranks[k], 16) << "window " << k;
}

// Piecewise attack with two clean gaps: the sliding rank must vary overall
// yet equal 16 on every window the ground truth classifies as clean.
TEST_F(Acceptance, Criterion3_Scenario2Detection) {
  Label("criterion 3: scenario-2 sliding-window detection");
  const auto start = std::chrono::steady_clock::now();
  const auto& bench = sadet::testing::benchmark();
  const data::IoDataset data = sadet::testing::dataset_of(bench.s2);
  const DetectorConfig cfg = config(10, 4, 6);

  const DetectionReport report = detect_partial_clean(data, cfg);
  EXPECT_EQ(report.t_star, 60);
  EXPECT_EQ(report.verdict, Verdict::attack);
  const auto& truths = bench.s2_preset.clean_intervals;
  int clean_windows = 0;
  for (int k = 0; k < static_cast<int>(report.window_ranks.size()); ++k) {
    if (attack::classify_window(truths, k, cfg.q, report.t_star) ==
        attack::IntervalClass::clean) {
      ++clean_windows;
      EXPECT_EQ(report.window_ranks[static_cast<std::size_t>(k)], 16) << "window " << k;
    }
  }
  EXPECT_GT(clean_windows, 0);
  EXPECT_LT(seconds_since(start), 30.0);
}

// Kernel/filter identification on scenario 2: the residual test passes for
// exactly the true support among the size-4 subsets.
TEST_F(Acceptance, Criterion4_Scenario2Identification) {
  Label("criterion 4: scenario-2 residual identification");
  const auto start = std::chrono::steady_clock::now();
  const auto& bench = sadet::testing::benchmark();
  const data::IoDataset data = sadet::testing::dataset_of(bench.s2);
  const DetectorConfig cfg = config(10, 4, 6);

  const IdentificationReport report = identify_partial_clean(data, cfg);
  const SensorSet truth({1, 2, 3, 4}, 5);
  const double eps = report.residual_eps_used;
  EXPECT_GT(eps, 0.0);
  for (const auto& [gamma, max_residual] : report.max_residuals) {
    if (gamma.size() != 4) continue;
    if (gamma == truth) {
      EXPECT_LE(max_residual, eps) << gamma.to_string();
    } else {
      EXPECT_GT(max_residual, eps) << gamma.to_string();
    }
  }
  EXPECT_EQ(report.gamma_star, truth);

  // per-sample residual sums for the true set stay at the numerical floor
  const int window_count = sadet::testing::kBenchLength - report.t_star - cfg.q + 2;
  for (const auto& [gamma, profile] : report.sigma_profiles) {
    if (!(gamma == truth)) continue;
    EXPECT_LE(profile.maxCoeff(), 5.0 * eps * window_count);
  }
  EXPECT_LT(seconds_since(start), 300.0);
}

// Rank dichotomy on randomized sparse-observable systems under fixed-support
// injections: rank m q + n exactly when the subset covers the support.
TEST_F(Acceptance, Criterion5_RankDichotomyRandomized) {
  Label("criterion 5: randomized rank dichotomy (50 systems)");
  std::mt19937_64 gen(501);
  int successes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 3);  // 2..4
    const int p = 3 + static_cast<int>(gen() % 3);  // 3..5
    const int m = 1 + static_cast<int>(gen() % 2);  // 1..2
    const int l = 1 + static_cast<int>(gen() % 2);  // 1..2
    // depth n + 1 keeps (p - l) * q > n, so the attacked stack has room to
    // exceed rank m q + n even when only one sensor survives the removal
    const int q = n + 1;
    const int N = 2 * (m * q + n) + q + 5;
    const model::LtiSystem sys = sadet::testing::random_sparse_observable(gen, n, m, p, l);

    const Eigen::MatrixXd u = sadet::testing::random_matrix(gen, m, N);
    const model::Trajectory traj = model::simulate(sys, Eigen::VectorXd::Zero(n), u);

    std::vector<int> ids;
    while (static_cast<int>(ids.size()) < l) {
      const int id = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(p));
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    const SensorSet support(ids, p);
    Eigen::MatrixXd outputs = traj.outputs_clean;
    for (int row : support.row_indices())
      for (int k = 0; k < N; ++k) outputs(row, k) += sadet::testing::uniform_pm1(gen);
    const data::IoDataset data(traj.inputs, outputs);

    if (!data::is_persistently_exciting(data, q)) continue;  // regenerate-free: count as miss
    bool ok = true;
    for (const auto& gamma : subsets_up_to(p, l)) {
      const Eigen::Index rank =
          linalg::numerical_rank(data::stack_z(data, gamma.complement(), q));
      const bool covered = gamma.contains_all(support);
      if (covered ? rank != m * q + n : rank <= m * q + n) ok = false;
    }
    if (ok) ++successes;
  }
  EXPECT_EQ(successes, 50);
}

// Residual dichotomy on randomized systems with one clean interval: a subset
// passes the threshold exactly when it covers the support.
TEST_F(Acceptance, Criterion6_ResidualDichotomyRandomized) {
  Label("criterion 6: randomized residual dichotomy (25 systems)");
  int successes = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const CleanIntervalInstance inst = make_clean_interval_instance(600 + trial);
    const IdentificationReport report =
        identify_partial_clean(inst.data, config(inst.q, inst.l, inst.sys.n()));
    bool ok = true;
    for (const auto& [gamma, max_residual] : report.max_residuals) {
      const bool covers = gamma.contains_all(inst.support);
      const bool passes = max_residual <= report.residual_eps_used;
      if (covers != passes) ok = false;
    }
    if (ok) ++successes;
  }
  EXPECT_EQ(successes, 25);
}

// Kernel action: from any clean window, the kernel annihilates exactly the
// windows whose stacked attack lies in the range of the observability map,
// and some transition window must break through.
TEST_F(Acceptance, Criterion7_KernelIdentity) {
  Label("criterion 7: clean-window kernel action");
  for (int trial = 0; trial < 25; ++trial) {
    const CleanIntervalInstance inst = make_clean_interval_instance(600 + trial);
    const DetectorConfig cfg = config(inst.q, inst.l, inst.sys.n());
    const int q = inst.q;
    const int N = inst.data.length();
    const int t_star = (1 + inst.data.p()) * q;  // identification default here
    const double eps = 1e-7;

    const Eigen::MatrixXd obs =
        model::extended_observability(inst.sys, SensorSet::full(inst.data.p()), q);
    const Eigen::Index obs_rank = linalg::numerical_rank(obs);

    // image membership of the stacked attack is a property of k alone
    const int k_count = N - q + 1;
    std::vector<bool> in_image(static_cast<std::size_t>(k_count));
    std::vector<bool> in_transition(static_cast<std::size_t>(k_count));
    for (int k = 0; k < k_count; ++k) {
      Eigen::VectorXd awin(static_cast<Eigen::Index>(inst.data.p()) * q);
      for (int i = 0; i < q; ++i)
        awin.segment(static_cast<Eigen::Index>(i) * inst.data.p(), inst.data.p()) =
            inst.injected.col(k + i);
      Eigen::MatrixXd joint(obs.rows(), obs.cols() + 1);
      joint << obs, awin;
      in_image[static_cast<std::size_t>(k)] = linalg::numerical_rank(joint) == obs_rank;
      in_transition[static_cast<std::size_t>(k)] =
          attack::classify_interval(inst.truth, k, q) == attack::IntervalClass::transition;
    }

    for (int t = 0; t + t_star + q - 1 <= N; ++t) {
      if (attack::classify_interval(inst.truth, t, q, t_star) !=
          attack::IntervalClass::clean)
        continue;
      const linalg::KernelBasis kernel = kernel_at(inst.data, cfg, t, t_star);
      ASSERT_GT(kernel.rows.rows(), 0);

      double max_transition = 0.0;
      for (int k = 0; k < k_count; ++k) {
        const double action = (kernel.rows * data::io_window(inst.data, q, k)).norm();
        if (in_image[static_cast<std::size_t>(k)]) {
          EXPECT_LE(action, eps) << "t=" << t << " k=" << k;
        }
        if (in_transition[static_cast<std::size_t>(k)])
          max_transition = std::max(max_transition, action);
      }
      EXPECT_GT(max_transition, 10.0 * eps) << "t=" << t;
    }
  }
}

// The benchmark input keeps every window of minimal width fully exciting.
TEST_F(Acceptance, Criterion8_MinimumExcitabilityHorizon) {
  Label("criterion 8: minimum excitability horizon equals m q");
  const auto& bench = sadet::testing::benchmark();
  const data::IoDataset data = sadet::testing::dataset_of(bench.clean);
  for (const int q : {5, 10, 16})
    EXPECT_EQ(data::min_excitability_horizon(data, q), q) << "q = " << q;
}

// Bitwise reproducibility and invariance of every decision under a global
// rescaling of the data.
TEST_F(Acceptance, Criterion9_DeterminismAndScaleInvariance) {
  Label("criterion 9: determinism and scale invariance");
  const DetectorConfig sparse_cfg = config(10, 2, 6);
  const DetectorConfig clean_cfg = config(10, 4, 6);

  // fresh end-to-end rebuilds must agree bit for bit
  auto build = [](const std::string& preset) {
    const model::LtiSystem sys = model::discretize_zoh(model::three_inertia());
    const Eigen::MatrixXd u =
        model::sine_with_noise_input(sadet::testing::kBenchLength, 0.01,
                                     0.5 * sadet::testing::kBenchPeriod, 1e-4,
                                     sadet::testing::kBenchSeed);
    auto scenario =
        attack::scenario_preset(preset, sadet::testing::kBenchLength,
                                sadet::testing::kBenchPeriod);
    return data::IoDataset::from_trajectory(
        model::simulate(sys, Eigen::VectorXd::Zero(sys.n()), u, &scenario.model));
  };
  const data::IoDataset first = build("s1_stealth_45");
  const data::IoDataset second = build("s1_stealth_45");
  EXPECT_TRUE(first.inputs == second.inputs && first.outputs == second.outputs);
  const DetectionReport d1 = detect_sparse(first, sparse_cfg);
  const DetectionReport d2 = detect_sparse(second, sparse_cfg);
  EXPECT_TRUE(d1 == d2);

  const data::IoDataset s2 = build("s2_piecewise_1234");
  const IdentificationReport i1 = identify_partial_clean(s2, clean_cfg);
  const IdentificationReport i2 = identify_partial_clean(s2, clean_cfg);
  EXPECT_TRUE(i1 == i2);

  // scaling all signals by 1e3 changes no decision
  const data::IoDataset s1_scaled(first.inputs * 1e3, first.outputs * 1e3);
  const DetectionReport d3 = detect_sparse(s1_scaled, sparse_cfg);
  EXPECT_EQ(d3.verdict, d1.verdict);
  EXPECT_EQ(d3.subset_ranks, d1.subset_ranks);
  const IdentificationReport i3 = identify_sparse(d3, sparse_cfg);
  EXPECT_EQ(i3.gamma_star, identify_sparse(d1, sparse_cfg).gamma_star);
  EXPECT_EQ(i3.candidates, identify_sparse(d1, sparse_cfg).candidates);

  const data::IoDataset s2_scaled(s2.inputs * 1e3, s2.outputs * 1e3);
  const IdentificationReport i4 = identify_partial_clean(s2_scaled, clean_cfg);
  EXPECT_EQ(i4.gamma_star, i1.gamma_star);
  EXPECT_EQ(i4.candidates, i1.candidates);

  const DetectionReport b1 = detect_partial_clean(s2, clean_cfg);
  const DetectionReport b2 = detect_partial_clean(s2_scaled, clean_cfg);
  EXPECT_EQ(b1.verdict, b2.verdict);
  EXPECT_EQ(b1.window_ranks, b2.window_ranks);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
