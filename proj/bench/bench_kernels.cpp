// Serial reference vs OpenMP kernels. Run with e.g.
//   OMP_NUM_THREADS=4 ./build/bench/bench_kernels
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "levybound/kernels.hpp"

using namespace levybound;

namespace {

Dataset random_data(std::size_t n, std::size_t dim, std::size_t classes) {
  RngStream rng(1, 5);
  Dataset d{dim, classes, std::vector<double>(n * dim), std::vector<std::uint32_t>(n)};
  for (double& x : d.features) x = rng.uniform_open();
  for (auto& y : d.labels) y = static_cast<std::uint32_t>(rng.below(classes));
  return d;
}

template <bool Parallel>
void BM_Sample(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto batch = Parallel ? kernels::sample_isotropic_batch(1.5, 10, count, 3)
                          : kernels::serial::sample_isotropic_batch(1.5, 10, count, 3);
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CharFn(benchmark::State& state) {
  const auto batch = kernels::serial::sample_isotropic_batch(1.5, 10, state.range(0), 3);
  const std::vector<double> xi(10, 0.3);
  for (auto _ : state) {
    auto e = Parallel ? kernels::char_fn(batch, xi) : kernels::serial::char_fn(batch, xi);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LossGrad(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = random_data(n, 784, 10);
  const auto spec = ModelSpec::fcn(784, 32, 10);
  RngStream rng(2);
  const auto w = init_params(spec, 1.0, rng);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (auto _ : state) {
    auto lg = Parallel ? kernels::loss_and_grad(spec, w, data, idx)
                       : kernels::serial::loss_and_grad(spec, w, data, idx);
    benchmark::DoNotOptimize(lg.grad.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_CountErrors(benchmark::State& state) {
  const auto data = random_data(state.range(0), 784, 10);
  const auto spec = ModelSpec::linear(784, 10);
  RngStream rng(4);
  const auto w = init_params(spec, 1.0, rng);
  for (auto _ : state) {
    auto c = Parallel ? kernels::count_errors(spec, w, data)
                      : kernels::serial::count_errors(spec, w, data);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Sample<false>)->Name("sample/serial")->Arg(1 << 16);
BENCHMARK(BM_Sample<true>)->Name("sample/omp")->Arg(1 << 16);
BENCHMARK(BM_CharFn<false>)->Name("char_fn/serial")->Arg(1 << 18);
BENCHMARK(BM_CharFn<true>)->Name("char_fn/omp")->Arg(1 << 18);
BENCHMARK(BM_LossGrad<false>)->Name("loss_grad/serial")->Arg(512);
BENCHMARK(BM_LossGrad<true>)->Name("loss_grad/omp")->Arg(512);
BENCHMARK(BM_CountErrors<false>)->Name("count_errors/serial")->Arg(4096);
BENCHMARK(BM_CountErrors<true>)->Name("count_errors/omp")->Arg(4096);

BENCHMARK_MAIN();
