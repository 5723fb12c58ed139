#include <benchmark/benchmark.h>

#include <random>

#include "tms/evolution.hpp"
#include "tms/geometry.hpp"
#include "tms/initial_data.hpp"
#include "tms/norms.hpp"

namespace {

tms::FieldState bump(int n, int q, int points) {
  tms::DataFamily family;
  family.epsilon = 0.05;
  family.sigma = 2.0;
  return tms::realize(family, tms::GridSpec{n, q, 20.0, points});
}

void BM_MetricPoint(benchmark::State& st) {
  const int q = static_cast<int>(st.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  tms::FirstJet jet(3, q);
  for (int I = 0; I < q; ++I)
    for (int mu = 0; mu <= 3; ++mu) jet(mu, I) = u(rng);
  for (auto _ : st) benchmark::DoNotOptimize(tms::metric_point(jet));
}
BENCHMARK(BM_MetricPoint)->Arg(1)->Arg(2)->Arg(3);

void BM_SecondTimeDerivative(benchmark::State& st) {
  const auto s = bump(static_cast<int>(st.range(0)), 1, static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tms::second_time_derivative(s));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.grid.cells()));
}
BENCHMARK(BM_SecondTimeDerivative)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& st) {
  const auto s = bump(static_cast<int>(st.range(0)), 1, static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(tms::rk4_step(s, 0.01));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.grid.cells()));
}
BENCHMARK(BM_Rk4Step)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);

void BM_ComputeNorms(benchmark::State& st) {
  const auto s = bump(static_cast<int>(st.range(0)), 1, static_cast<int>(st.range(1)));
  const auto td = tms::time_derivatives(s);
  for (auto _ : st) benchmark::DoNotOptimize(tms::compute_norms(s, td));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.grid.cells()));
}
BENCHMARK(BM_ComputeNorms)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
