// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "perigen/kernels.hpp"
#include "perigen/series.hpp"

namespace {

using perigen::cplx;

std::vector<cplx> random_coefficients(int degree, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> c(2 * std::size_t(degree) + 1);
  for (auto& z : c) z = {g(rng), g(rng)};
  return c;
}

void BM_AbsOnGrid(benchmark::State& state) {
  const int degree = int(state.range(0));
  const auto c = random_coefficients(degree, 1);
  const std::size_t grid = std::max<std::size_t>(4096, 16 * std::size_t(degree) + 1);
  std::vector<double> out(grid);
  for (auto _ : state) {
    perigen::kernels::abs_on_grid(c, degree, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_AbsOnGridSerial(benchmark::State& state) {
  const int degree = int(state.range(0));
  const auto c = random_coefficients(degree, 1);
  const std::size_t grid = std::max<std::size_t>(4096, 16 * std::size_t(degree) + 1);
  std::vector<double> out(grid);
  for (auto _ : state) {
    perigen::kernels::abs_on_grid_serial(c, degree, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_CauchyProduct(benchmark::State& state) {
  const int degree = int(state.range(0));
  const auto a = random_coefficients(degree, 2);
  const auto b = random_coefficients(degree, 3);
  for (auto _ : state) benchmark::DoNotOptimize(perigen::kernels::cauchy_product(a, degree, b, degree));
}

void BM_CauchyProductSerial(benchmark::State& state) {
  const int degree = int(state.range(0));
  const auto a = random_coefficients(degree, 2);
  const auto b = random_coefficients(degree, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(perigen::kernels::cauchy_product_serial(a, degree, b, degree));
}

void BM_SupNorm(benchmark::State& state) {
  const int degree = int(state.range(0));
  const perigen::TrigPoly f(degree, random_coefficients(degree, 4));
  for (auto _ : state) benchmark::DoNotOptimize(perigen::sup_norm(f));
}

}  // namespace

BENCHMARK(BM_AbsOnGrid)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_AbsOnGridSerial)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_CauchyProduct)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_CauchyProductSerial)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_SupNorm)->RangeMultiplier(4)->Range(16, 1024);

BENCHMARK_MAIN();
