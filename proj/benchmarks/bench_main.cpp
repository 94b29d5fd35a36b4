#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "compacton/evolution.hpp"
#include "compacton/functionals.hpp"
#include "compacton/linearized_flow.hpp"
#include "compacton/periodic_grid.hpp"
#include "compacton/profiles.hpp"
#include "compacton/spectral.hpp"

using namespace compacton;

static void BM_ClosedFormProfile(benchmark::State& state) {
  const ModelParams mp{4.0, 0.0, 0.25, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(build_compacton(mp, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ClosedFormProfile)->Arg(1024)->Arg(4096);

static void BM_QuadratureProfile(benchmark::State& state) {
  const ModelParams mp{3.0, 0.0, 0.25, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(build_compacton_quadrature(mp, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_QuadratureProfile)->Arg(1024)->Arg(4096);

static void BM_FunctionalReport(benchmark::State& state) {
  const auto prof = build_compacton({4.0, 0.0, 0.25, 1.0}, 4096);
  for (auto _ : state) benchmark::DoNotOptimize(functional_report(prof));
}
BENCHMARK(BM_FunctionalReport);

static void BM_MinimizeP3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(minimize_in_family(3.0, 1.0));
}
BENCHMARK(BM_MinimizeP3)->Unit(benchmark::kMillisecond);

static void BM_EigB(benchmark::State& state) {
  for (auto _ : state) {
    const auto bop = b_transform(12.0, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(eig_b(bop, 2));
  }
}
BENCHMARK(BM_EigB)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_EigGreen(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(eig_green(CaseTag::B14c1, static_cast<std::size_t>(state.range(0)), 2));
}
BENCHMARK(BM_EigGreen)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_GreenApply(benchmark::State& state) {
  const LinearizedOperator op(CaseTag::B14c1, static_cast<std::size_t>(state.range(0)));
  std::vector<double> f(op.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-op.xs()[i] * op.xs()[i]);
  for (auto _ : state) benchmark::DoNotOptimize(green_apply(op, f));
}
BENCHMARK(BM_GreenApply)->Arg(4096)->Arg(16384);

static void BM_LinearizedFlow(benchmark::State& state) {
  const LinearizedOperator op(CaseTag::B14c1, static_cast<std::size_t>(state.range(0)));
  const auto v0 = random_constrained_data(op, 1);
  FlowOptions opt;
  opt.t_end = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_linearized(op, v0, {}, opt));
}
BENCHMARK(BM_LinearizedFlow)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_DkdvRhs(benchmark::State& state) {
  const PeriodicGrid grid(40.0, static_cast<std::size_t>(state.range(0)));
  const auto s = initial_condition(InitialKind::Compacton, {}, grid);
  for (auto _ : state) benchmark::DoNotOptimize(dkdv_rhs(s.u, grid));
}
BENCHMARK(BM_DkdvRhs)->Arg(1024)->Arg(2048)->Arg(4096);

static void BM_DnlsRhs(benchmark::State& state) {
  const double L = std::sqrt(2.0) * 3.14159265358979323846;
  const PeriodicGrid grid(L, static_cast<std::size_t>(state.range(0)));
  InitialParams ip;
  ip.B = -0.2;
  const auto s = initial_condition(InitialKind::Periodic, ip, grid);
  for (auto _ : state) benchmark::DoNotOptimize(dnls_rhs(s.v, grid));
}
BENCHMARK(BM_DnlsRhs)->Arg(512)->Arg(2048);
BENCHMARK_MAIN();
