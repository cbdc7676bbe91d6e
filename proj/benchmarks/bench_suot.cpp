#include <benchmark/benchmark.h>

#include <vector>

#include "suotbary/barycenter.hpp"
#include "suotbary/bures.hpp"
#include "suotbary/suot.hpp"

namespace {

using suotbary::SpdMatrix;

void BM_SolveSuot(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SpdMatrix a = suotbary::sample_spd(d, 0.5, 1);
  const SpdMatrix b = suotbary::sample_spd(d, 0.5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(suotbary::relaxed_covariance(a, b, 1.0));
  }
}
BENCHMARK(BM_SolveSuot)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Arg(50);

void BM_SuotGradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SpdMatrix a = suotbary::sample_spd(d, 0.5, 1);
  const SpdMatrix b = suotbary::sample_spd(d, 0.5, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(suotbary::suot_gradient(a, b, 1.0));
  }
}
BENCHMARK(BM_SuotGradient)->Arg(2)->Arg(5)->Arg(10)->Arg(20)->Arg(50);

suotbary::BarycenterProblem make_problem(int d, int n) {
  std::vector<SpdMatrix> covs;
  for (int i = 0; i < n; ++i) covs.push_back(suotbary::sample_spd(d, 0.5, 100 + static_cast<std::uint64_t>(i)));
  return suotbary::BarycenterProblem::uniform(std::move(covs), 1.0);
}

void BM_Objective(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 20);
  const SpdMatrix init = SpdMatrix::identity(problem.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(suotbary::objective(problem, init));
  }
}
BENCHMARK(BM_Objective)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

// One full iteration of each deterministic method.
void BM_ExactStep(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 20);
  const SpdMatrix init = SpdMatrix::identity(problem.dim());
  suotbary::OptimConfig config;
  config.eta = 0.5;
  config.max_iters = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(suotbary::exact_geodesic_gd(problem, config, init));
  }
}
BENCHMARK(BM_ExactStep)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_HybridStep(benchmark::State& state) {
  const auto problem = make_problem(static_cast<int>(state.range(0)), 20);
  const SpdMatrix init = SpdMatrix::identity(problem.dim());
  suotbary::OptimConfig config;
  config.eta = 1.0;
  config.max_iters = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(suotbary::hybrid_gd(problem, config, init));
  }
}
BENCHMARK(BM_HybridStep)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
