// Microbenchmarks for the hot paths: factorization, positivity checks,
// semivariation search, and the smearing coherence sweep.

#include <benchmark/benchmark.h>

#include <vector>

#include "gfl/fields.hpp"
#include "gfl/kernels.hpp"
#include "gfl/measures.hpp"
#include "gfl/rng.hpp"

namespace {

using namespace gfl;

std::vector<std::string> labels(Index m) {
  std::vector<std::string> out;
  for (Index i = 0; i < m; ++i) out.push_back("l" + std::to_string(i));
  return out;
}

OperatorKernel gram_kernel(Index q, Index m, uint64_t seed) {
  Rng rng(seed);
  const Matrix x = rng.complex_gaussian_matrix(m * q, m * q + 2);
  return kernel_from_assembled(labels(m), q, Matrix(x * x.adjoint()));
}

RandomField make_field(const Grid& grid, Index q, Index p, uint64_t seed) {
  Rng rng(seed);
  const ModuleSpace space(q, p);
  std::vector<RandomVariable> values;
  for (Index c = 0; c < grid.size(); ++c)
    values.emplace_back(space, rng.complex_gaussian_matrix(q, p));
  return RandomField(grid, std::move(values));
}

void bm_factorize(benchmark::State& state) {
  const Index q = state.range(0);
  const Index m = state.range(1);
  const OperatorKernel k = gram_kernel(q, m, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(kolmogorov_factorize(k));
}
BENCHMARK(bm_factorize)->Args({1, 4})->Args({2, 8})->Args({4, 8});

void bm_positivity(benchmark::State& state) {
  const Index q = state.range(0);
  const Index m = state.range(1);
  const OperatorKernel k = gram_kernel(q, m, 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(is_positive_definite(k));
}
BENCHMARK(bm_positivity)->Args({2, 8})->Args({4, 8});

void bm_positivity_sample(benchmark::State& state) {
  const OperatorKernel k = gram_kernel(2, 4, 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        operator_coefficient_positivity_sample(k, 200, 19));
}
BENCHMARK(bm_positivity_sample);

void bm_semivariation_exhaustive(benchmark::State& state) {
  const Index cells = state.range(0);
  const Grid grid(1, cells, 1.0, {0.0, 0.0});
  const StochasticMeasure xi = measure_from_field(make_field(grid, 2, 2, 23));
  std::vector<Index> all;
  for (Index c = 0; c < cells; ++c) all.push_back(c);
  const CellSet a(grid, all);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        semivariation(xi, a, SemivariationStrategy::exhaustive()));
}
BENCHMARK(bm_semivariation_exhaustive)->Arg(4)->Arg(8);

void bm_semivariation_ascent(benchmark::State& state) {
  const Grid grid(1, 16, 1.0, {0.0, 0.0});
  const StochasticMeasure xi = measure_from_field(make_field(grid, 2, 2, 29));
  std::vector<Index> all;
  for (Index c = 0; c < 16; ++c) all.push_back(c);
  const CellSet a(grid, all);
  const SemivariationStrategy strategy = SemivariationStrategy::ascent(8, 31);
  for (auto _ : state)
    benchmark::DoNotOptimize(operator_semivariation(xi, a, strategy));
}
BENCHMARK(bm_semivariation_ascent);

void bm_coherence(benchmark::State& state) {
  const Index n = state.range(0);
  const Grid grid(1, n, 0.5, {0.0, 0.0});
  const RandomField f = make_field(grid, 2, 3, 37);
  std::vector<TestFunction> basis;
  for (Index c = 0; c < grid.size(); ++c)
    basis.push_back(cell_indicator(grid, c));
  for (auto _ : state)
    benchmark::DoNotOptimize(coherence_check(f, basis));
}
BENCHMARK(bm_coherence)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
