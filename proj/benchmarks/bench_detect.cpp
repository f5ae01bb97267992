#include <benchmark/benchmark.h>

#include "sadet/attack.hpp"
#include "sadet/detector.hpp"
#include "sadet/hankel.hpp"
#include "sadet/system.hpp"

namespace {

using namespace sadet;

data::IoDataset bench_dataset(int length, const char* preset) {
  static const model::LtiSystem sys = model::discretize_zoh(model::three_inertia());
  const Eigen::MatrixXd u = model::sine_with_noise_input(length, 0.01, 0.05, 1e-4, 7);
  if (preset == nullptr)
    return data::IoDataset::from_trajectory(
        model::simulate(sys, Eigen::VectorXd::Zero(6), u));
  auto scenario = attack::scenario_preset(preset, length, 0.1);
  return data::IoDataset::from_trajectory(
      model::simulate(sys, Eigen::VectorXd::Zero(6), u, &scenario.model));
}

detect::DetectorConfig bench_config(int q, int l) {
  detect::DetectorConfig cfg;
  cfg.q = q;
  cfg.l = l;
  cfg.n_bound = 6;
  return cfg;
}

void HankelConstruction(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(static_cast<int>(state.range(0)), nullptr);
  for (auto _ : state) {
    auto view = data::hankel(data, data::Signal::outputs, 10);
    benchmark::DoNotOptimize(view.matrix);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(HankelConstruction)->RangeMultiplier(2)->Range(125, 500)->Complexity();

void NumericalRankFullStack(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(static_cast<int>(state.range(0)), nullptr);
  const Eigen::MatrixXd z = data::stack_z(data, SensorSet::full(5), 10);
  for (auto _ : state) {
    auto rank = linalg::numerical_rank(z);
    benchmark::DoNotOptimize(rank);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(NumericalRankFullStack)->RangeMultiplier(2)->Range(125, 500)->Complexity();

void DetectSparseScan(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(500, "s1_stealth_45");
  const detect::DetectorConfig cfg = bench_config(10, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto report = detect::detect_sparse(data, cfg);
    benchmark::DoNotOptimize(report.verdict);
  }
}
BENCHMARK(DetectSparseScan)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void SlidingWindowRanks(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(static_cast<int>(state.range(0)),
                                             "s2_piecewise_1234");
  const detect::DetectorConfig cfg = bench_config(10, 4);
  for (auto _ : state) {
    auto report = detect::detect_partial_clean(data, cfg);
    benchmark::DoNotOptimize(report.window_ranks);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SlidingWindowRanks)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

void KernelWindow(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(500, "s2_piecewise_1234");
  const detect::DetectorConfig cfg = bench_config(10, 4);
  for (auto _ : state) {
    auto kernel = detect::kernel_at(data, cfg, 100, 60);
    benchmark::DoNotOptimize(kernel.rows);
  }
}
BENCHMARK(KernelWindow)->Unit(benchmark::kMicrosecond);

void ResidualSweepOneWindow(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(500, "s2_piecewise_1234");
  const detect::DetectorConfig cfg = bench_config(10, 4);
  const linalg::KernelBasis kernel = detect::kernel_at(data, cfg, 100, 60);
  const Eigen::MatrixXd filter =
      detect::filter_matrix(kernel, SensorSet({1, 2, 3, 4}, 5), cfg.q);
  for (auto _ : state) {
    double total = 0.0;
    for (int k = 0; k + cfg.q <= data.length(); ++k)
      total += detect::residual(data, kernel, filter, k, cfg.q).norm();
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * (data.length() - cfg.q + 1));
}
BENCHMARK(ResidualSweepOneWindow)->Unit(benchmark::kMillisecond);

void IdentifyPartialClean(benchmark::State& state) {
  const data::IoDataset data = bench_dataset(static_cast<int>(state.range(0)),
                                             "eq22_ramp_123");
  const detect::DetectorConfig cfg = bench_config(10, 3);
  for (auto _ : state) {
    auto report = detect::identify_partial_clean(data, cfg);
    benchmark::DoNotOptimize(report.gamma_star);
  }
}
BENCHMARK(IdentifyPartialClean)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
