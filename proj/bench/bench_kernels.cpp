// Serial reference vs OpenMP backend for the hot loops.
//   ./bench_kernels --benchmark_filter=contract

#include <benchmark/benchmark.h>

#include <random>

#include "onsager/commutator.hpp"
#include "onsager/holder.hpp"
#include "onsager/kernels.hpp"
#include "onsager/mollify.hpp"
#include "onsager/synthesis.hpp"

using namespace onsager;
using kernels::Backend;

namespace {

GridField field(int n) {
  SynthesisSpec s;
  s.seed = 3;
  return synthesize_holder_field(s, {n, n, n});
}

kernels::Gradient gradient(std::size_t size) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  kernels::Gradient out;
  for (auto& c : out) {
    c.resize(size);
    for (double& x : c) x = g(rng);
  }
  return out;
}

Backend backend(const benchmark::State& state) { return state.range(1) ? Backend::kParallel : Backend::kSerial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "openmp x" + std::to_string(kernels::max_threads()) : "serial");
}

void BM_SupIncrement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridField u = field(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::sup_increment(kernels::view(u), u.dims(), {3, -1, 2}, backend(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
  label(state);
}

void BM_Contract(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dims d{n, n, n};
  const GridField u = field(n);
  const kernels::Gradient g = gradient(d.total());
  kernels::SymTensor t;
  for (auto& c : t) c.assign(d.total(), 0.0);
  kernels::accumulate_outer(1.0, kernels::view(u), t, Backend::kSerial);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::contract(t, g, d, {}, backend(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.total()));
  label(state);
}

void BM_ContractOuter(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Dims d{n, n, n};
  const GridField u = field(n);
  const kernels::Gradient g = gradient(d.total());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::contract_outer(kernels::view(u), g, d, {}, backend(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.total()));
  label(state);
}

void BM_AccumulateOuter(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridField u = field(n);
  kernels::SymTensor t;
  for (auto& c : t) c.assign(u.size(), 0.0);
  for (auto _ : state) {
    kernels::accumulate_outer(0.5, kernels::view(u), t, backend(state));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
  label(state);
}

// End to end: the increment profile behind every seminorm estimate.
void BM_IncrementProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridField u = field(n);
  for (auto _ : state) benchmark::DoNotOptimize(increment_profile(u, 0.0, false, backend(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_SupIncrement)->ArgsProduct({{32, 64}, {0, 1}});
BENCHMARK(BM_Contract)->ArgsProduct({{32, 64}, {0, 1}});
BENCHMARK(BM_ContractOuter)->ArgsProduct({{32, 64}, {0, 1}});
BENCHMARK(BM_AccumulateOuter)->ArgsProduct({{32, 64}, {0, 1}});
BENCHMARK(BM_IncrementProfile)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
