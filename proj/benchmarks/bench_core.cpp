#include <benchmark/benchmark.h>

#include "optomech/analytic.hpp"
#include "optomech/classical.hpp"
#include "optomech/quantum.hpp"
#include "optomech/sweep.hpp"

using namespace optomech;

namespace {

SystemParams fig1() {
  SystemParams p;
  p.E = 6e4;
  p.lambda_gain = 0.02;
  p.omega_pump = 1.16;
  return p;
}

void BM_ClassicalWithTangent(benchmark::State& state) {
  const SystemParams p = fig1();
  const double t_end = state.range(0) * p.modulation_period();
  IntegratorConfig cfg;
  cfg.record_from = t_end - p.modulation_period();
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_classical(p, {}, kDefaultPerturbation, t_end, cfg));
  }
}
BENCHMARK(BM_ClassicalWithTangent)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_JointIntegration(benchmark::State& state) {
  const SystemParams p = fig1();
  const double t_end = state.range(0) * p.modulation_period();
  IntegratorConfig cfg;
  cfg.record_from = t_end - p.modulation_period();
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_joint(p, {}, CovarianceState::thermal(0.0), t_end, cfg));
  }
}
BENCHMARK(BM_JointIntegration)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SimulatePoint(benchmark::State& state) {
  SystemParams p = fig1();
  p.E = 8.6e4;
  p.lambda_gain = 0.043;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_point(p, PointProtocol{}));
}
BENCHMARK(BM_SimulatePoint)->Unit(benchmark::kMillisecond);

void BM_LogNegativity(benchmark::State& state) {
  CovarianceState v;
  const double c = std::cosh(1.0) / 2, s = std::sinh(1.0) / 2;
  v.v << c, 0.01, s, 0, 0.01, c + 0.2, 0, -s, s, 0, c, 0.02, 0, -s, 0.02, c + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(log_negativity(v));
}
BENCHMARK(BM_LogNegativity);

void BM_DRoots(benchmark::State& state) {
  const SystemParams p = fig1();
  const auto z = solve_zeroth_order(p);
  for (auto _ : state) benchmark::DoNotOptimize(d_roots(p, z));
}
BENCHMARK(BM_DRoots);

void BM_ZerothOrder(benchmark::State& state) {
  const SystemParams p = fig1();
  for (auto _ : state) benchmark::DoNotOptimize(solve_zeroth_order(p));
}
BENCHMARK(BM_ZerothOrder);

}  // namespace
BENCHMARK_MAIN();
