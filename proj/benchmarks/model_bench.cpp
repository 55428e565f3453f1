#include <benchmark/benchmark.h>

#include "hyperfermi/cluster.hpp"
#include "hyperfermi/model.hpp"

namespace hyperfermi {
namespace {

template <Scalar T>
void BM_PartitionFunctionChain(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const Model<T> model(path_graph(L), Rational(1, 20), m);
  for (auto _ : state) benchmark::DoNotOptimize(model.partition_function());
}
BENCHMARK_TEMPLATE(BM_PartitionFunctionChain, Rational)->ArgsProduct({{4, 6, 8}, {1, 2}});
BENCHMARK_TEMPLATE(BM_PartitionFunctionChain, double)->ArgsProduct({{4, 6, 8}, {1, 2}});

void BM_TwoPointChain(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const Model<Rational> model(path_graph(L), Rational(1, 100), 1);
  for (auto _ : state) benchmark::DoNotOptimize(model.two_point(0, L - 1, 1));
}
BENCHMARK(BM_TwoPointChain)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

void BM_PolymerPrecompute(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PolymerSystem<Rational> sys(Model<Rational>(path_graph(L), Rational(1, 20), 1));
    sys.precompute();
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_PolymerPrecompute)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hyperfermi

BENCHMARK_MAIN();
