#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "aggmc/aggmc.hpp"

using namespace aggmc;

namespace {

TransitionMatrix fixture(const std::string& name) {
  return load_matrix_file(std::string(AGGMC_FIXTURE_DIR) + "/" + name).matrix;
}

TransitionMatrix random_positive(Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix a(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) a(i, j) = u(rng);
    a.row(i) /= a.row(i).sum();
  }
  return TransitionMatrix::validate(a);
}

void BM_PkSequence(benchmark::State& state) {
  const auto d = decompose(random_positive(state.range(0), 1));
  for (auto _ : state) benchmark::DoNotOptimize(pk_sequence(d, 200));
}
BENCHMARK(BM_PkSequence)->Arg(4)->Arg(16)->Arg(64);

void BM_AnalyzeFactor(benchmark::State& state) {
  const auto m = random_positive(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_factor(m));
}
BENCHMARK(BM_AnalyzeFactor)->Arg(4)->Arg(16)->Arg(64);

void BM_AnalyzeFixture(benchmark::State& state) {
  static const char* names[] = {"example1.json", "example2.json", "example3.json", "example4.json"};
  const auto m = fixture(names[state.range(0)]);
  state.SetLabel(names[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_factor(m));
}
BENCHMARK(BM_AnalyzeFixture)->DenseRange(0, 3);

void BM_PkEnumeration(benchmark::State& state) {
  const auto m = random_positive(5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pk_enumeration(m, state.range(0)));
}
BENCHMARK(BM_PkEnumeration)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto m = random_positive(8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_GibbsGrid(benchmark::State& state) {
  const auto d = decompose(random_positive(8, 5));
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_grid(d, state.range(0), state.range(0)));
}
BENCHMARK(BM_GibbsGrid)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
