#include <benchmark/benchmark.h>

#include "kwidth/kwidth.hpp"

using namespace kwidth;

static void BM_Neumann(benchmark::State& state) {
  const auto p = NeumannParams::make(state.range(0) / 100.0, 0.5);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_neumann(p, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_Neumann)->Arg(21)->Arg(50)->Arg(90);

static void BM_Pq(benchmark::State& state) {
  const double q = state.range(0) / 100.0;
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_Pq(q, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_Pq)->Arg(20)->Arg(50)->Arg(90);

static void BM_SolveTheta(benchmark::State& state) {
  const auto p = NeumannParams::make(0.5, 0.7);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_theta(p, n));
}
BENCHMARK(BM_SolveTheta)->Arg(1)->Arg(10)->Arg(1000);

static void BM_ExactWidth(benchmark::State& state) {
  const auto p = NeumannParams::make(0.3, 1.7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_width(p, 25));
}
BENCHMARK(BM_ExactWidth);

static void BM_ComputeNq(benchmark::State& state) {
  const double q = state.range(0) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_nq(q));
}
BENCHMARK(BM_ComputeNq)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);

static void BM_DirectSolve(benchmark::State& state) {
  const auto p = NeumannParams::make(0.2, 0.5);
  const int n = static_cast<int>(state.range(0));
  const double y = solve_theta(p, n).y0();
  const auto spec = KernelSpec::neumann(p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fundamental_spline(spec, n, y));
}
BENCHMARK(BM_DirectSolve)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_SecondRepresentation(benchmark::State& state) {
  const auto p = NeumannParams::make(0.2, 0.5);
  const int n = static_cast<int>(state.range(0));
  const auto shift = ShiftPoint::at_root(solve_theta(p, n));
  for (auto _ : state) {
    const auto eigen = decompose_eigenvalues(p, n, shift);
    benchmark::DoNotOptimize(lemma2_ledgers(p, eigen));
  }
}
BENCHMARK(BM_SecondRepresentation)->Arg(13)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_CorrectionBound(benchmark::State& state) {
  const auto p = NeumannParams::make(0.2, 0.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lemma3_bound(p, n));
}
BENCHMARK(BM_CorrectionBound)->Arg(40)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_DeterminantD3(benchmark::State& state) {
  const auto kernel = CvdKernel::neumann(NeumannParams::make(0.21, 0.0));
  const auto nodes = reference_nodes_negative();
  for (auto _ : state) benchmark::DoNotOptimize(det_D(kernel, nodes, 1));
}
BENCHMARK(BM_DeterminantD3);
BENCHMARK_MAIN();
