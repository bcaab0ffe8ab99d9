#include <benchmark/benchmark.h>

#include "simplex/metrics.hpp"
#include "simplex/optimizer.hpp"
#include "simplex/risk.hpp"
#include "simplex/rng.hpp"
#include "simplex/sampling.hpp"

using namespace simplex;

namespace {

Simplex bench_simplex(std::size_t k) {
  return random_simplex(k, SimplexKind::gaussian_vertices, 1.0, 99);
}

void BM_FacetHyperplanes(benchmark::State& state) {
  const Simplex s = bench_simplex(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(facet_hyperplanes(s));
  }
}
BENCHMARK(BM_FacetHyperplanes)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

void BM_CrrGradient(benchmark::State& state) {
  const std::size_t k = state.range(0);
  const std::size_t n = state.range(1);
  const Simplex truth = bench_simplex(k);
  const Dataset d = sample_uniform(truth, n, 7);
  Matrix shrunk = truth.vertices();
  for (double& x : shrunk.data()) x *= 0.8;
  const Simplex s{Matrix(shrunk)};
  const LossSpec spec{LossKind::exponential, 1.0, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(crr_gradient(s, d, spec));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CrrGradient)->Args({2, 1000})->Args({5, 1000})->Args({10, 1000});

void BM_FitIteration(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Simplex truth = random_simplex(2, SimplexKind::regular, 1.0, 0);
  const Dataset d = sample_uniform(truth, n, 5);
  FitConfig cfg;
  cfg.iterations = 50;
  cfg.alpha = 0.03;
  cfg.gamma = 0.2;
  cfg.seed = 1;
  cfg.acceleration =
      state.range(1) ? Acceleration::active_set : Acceleration::off;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(d, 2, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_FitIteration)->Args({1000, 0})->Args({1000, 1})->Args({5000, 0})->Args({5000, 1});

void BM_ExtremePoints2D(benchmark::State& state) {
  const Simplex truth = random_simplex(2, SimplexKind::regular, 1.0, 0);
  const Dataset d = sample_uniform(truth, state.range(0), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extreme_points(d, HullMode::exact, 0, 0));
  }
}
BENCHMARK(BM_ExtremePoints2D)->Range(256, 1 << 16);

void BM_ExtremePointsApprox(benchmark::State& state) {
  const Simplex truth = bench_simplex(8);
  const Dataset d = sample_uniform(truth, state.range(0), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extreme_points(d, HullMode::approximate, 400, 11));
  }
}
BENCHMARK(BM_ExtremePointsApprox)->Range(1024, 1 << 14);

void BM_TvDistance(benchmark::State& state) {
  const Simplex a = bench_simplex(4);
  Matrix shifted = a.vertices();
  for (std::size_t j = 0; j < shifted.cols(); ++j) shifted(0, j) += 0.1;
  const Simplex b{Matrix(shifted)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tv_distance_mc(a, b, state.range(0), 17));
  }
}
BENCHMARK(BM_TvDistance)->Arg(10000)->Arg(100000);

void BM_VertexError(benchmark::State& state) {
  const Simplex a = bench_simplex(state.range(0));
  const Simplex b = random_simplex(state.range(0), SimplexKind::gaussian_vertices, 1.0, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vertex_error(a, b));
  }
}
BENCHMARK(BM_VertexError)->Arg(2)->Arg(8)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
