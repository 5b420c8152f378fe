#include <benchmark/benchmark.h>

#include <random>

#include "pvw/kernels.hpp"

using namespace pvw;

namespace {

struct Fixture {
  ModalMatrix basis;
  std::vector<double> coeffs, weights, values, out;
  Fixture(int modes, int nodes) : basis(modes, nodes), coeffs(modes), weights(nodes), values(nodes) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& x : basis.data) x = u(rng);
    for (double& x : coeffs) x = u(rng);
    for (double& x : weights) x = 1.0 + u(rng) / 2;
    for (double& x : values) x = u(rng);
  }
};

void BM_synthesize(benchmark::State& state, Exec exec) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    synthesize(f.basis, f.coeffs, f.out, exec);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void BM_project(benchmark::State& state, Exec exec) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    project(f.basis, f.weights, f.values, f.out, exec);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({32, 128})->Args({128, 512})->Args({512, 2048});
}

}  // namespace

BENCHMARK_CAPTURE(BM_synthesize, serial, Exec::Serial)->Apply(sizes);
BENCHMARK_CAPTURE(BM_synthesize, parallel, Exec::Parallel)->Apply(sizes);
BENCHMARK_CAPTURE(BM_project, serial, Exec::Serial)->Apply(sizes);
BENCHMARK_CAPTURE(BM_project, parallel, Exec::Parallel)->Apply(sizes);

BENCHMARK_MAIN();
