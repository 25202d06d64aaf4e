#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dwell/ansatz.hpp"
#include "dwell/chaos.hpp"
#include "dwell/eigen.hpp"
#include "dwell/propagator.hpp"
#include "dwell/reduced.hpp"

namespace {

void BM_SplitOperatorStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = dwell::make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), n);
  auto psi = dwell::synthesize_wavefunction(dwell::one_well_state(shape, shape.b0), grid);
  dwell::SplitOperator op(grid, p, 0.001);
  constexpr std::size_t steps = 100;
  for (auto _ : state) {
    op.advance(psi, steps);
    benchmark::DoNotOptimize(psi.amps.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}
BENCHMARK(BM_SplitOperatorStep)->Arg(256)->Arg(2048)->Arg(4096);

void BM_Measure(benchmark::State& state) {
  const auto p = dwell::make_params(0.2, 0.3);
  const auto shape = dwell::solve_ansatz_params(p);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 2048);
  const auto psi = dwell::synthesize_wavefunction(dwell::one_well_state(shape), grid);
  dwell::SplitOperator op(grid, p, 0.001);
  for (auto _ : state) benchmark::DoNotOptimize(op.measure(psi));
}
BENCHMARK(BM_Measure);

void BM_DuffingStep(benchmark::State& state) {
  const auto p = dwell::make_params(0.2);
  const auto drive = dwell::DriveSpec::sinusoid(0.14229, std::numbers::sqrt2);
  dwell::PhasePoint s{0.1, 0.0, 0.0};
  for (auto _ : state) {
    s = dwell::duffing_step(s, p, drive, 0.01);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_DuffingStep);

void BM_Lyapunov1000Periods(benchmark::State& state) {
  const auto p = dwell::make_params(0.2);
  const auto drive = dwell::DriveSpec::sinusoid(0.14229, std::numbers::sqrt2);
  const double t_end = 1000.0 * 2.0 * std::numbers::pi / std::numbers::sqrt2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dwell::largest_lyapunov({0.1, 0.0, 0.0}, p, drive, t_end, 0.01).exponent);
  }
}
BENCHMARK(BM_Lyapunov1000Periods)->Unit(benchmark::kMillisecond);

void BM_PowerSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> t(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 0.01 * static_cast<double>(i);
    y[i] = std::cos(1.3 * t[i]) + 0.1 * std::sin(7.0 * t[i]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dwell::power_spectrum(t, y).total_power());
}
BENCHMARK(BM_PowerSpectrum)->Arg(4096)->Arg(65536);

void BM_Eigenpairs(benchmark::State& state) {
  const auto p = dwell::make_params(0.2, 0.3);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dwell::eigenpairs(p, grid, 4).front().energy);
}
BENCHMARK(BM_Eigenpairs)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_TunnelingGap(benchmark::State& state) {
  const auto p = dwell::make_params(0.2, 0.1);
  const auto grid = dwell::symmetric_grid(4.0 / std::sqrt(p.lambda), 1024);
  for (auto _ : state) benchmark::DoNotOptimize(dwell::tunneling_gap(p, grid).extrapolated);
}
BENCHMARK(BM_TunnelingGap)->Unit(benchmark::kMillisecond);

void BM_AnsatzSolve(benchmark::State& state) {
  const auto p = dwell::make_params(0.2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(dwell::solve_ansatz_params(p).b0);
}
BENCHMARK(BM_AnsatzSolve);

}  // namespace

BENCHMARK_MAIN();
